#pragma once

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lightfield.hpp"
#include "scene.hpp"

namespace raylf {

// --- key=value sidecars ------------------------------------------------

inline std::map<std::string, std::string> parse_kv_text(std::istream& in,
                                                        const std::string& what) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(what + ": line " + std::to_string(lineno) + " is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw IoError(what + ": empty key at line " + std::to_string(lineno));
        if (kv.count(key)) throw IoError(what + ": duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

inline std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_kv_text(in, path);
}

inline long kv_int(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& what) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(what + ": missing key '" + key + "'");
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(it->second, &used);
    } catch (const std::exception&) {
        throw IoError(what + ": key '" + key + "' is not an integer");
    }
    if (used != it->second.size())
        throw IoError(what + ": key '" + key + "' is not an integer");
    return v;
}

inline double kv_double(const std::map<std::string, std::string>& kv,
                        const std::string& key, const std::string& what) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(what + ": missing key '" + key + "'");
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        throw IoError(what + ": key '" + key + "' is not a number");
    }
    if (used != it->second.size())
        throw IoError(what + ": key '" + key + "' is not a number");
    return v;
}

// --- raw lenslet sequences ----------------------------------------------

struct SequenceHeader {
    int width = 0, height = 0, px = 0, py = 0, frames = 0;
};

inline void write_header_sidecar(const std::string& path, const SequenceHeader& h) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "width=" << h.width << "\nheight=" << h.height << "\npx=" << h.px
        << "\npy=" << h.py << "\nframes=" << h.frames << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline SequenceHeader read_header_sidecar(const std::string& path) {
    const auto kv = parse_kv_file(path);
    for (const auto& [key, val] : kv)
        require(key == "width" || key == "height" || key == "px" || key == "py" ||
                    key == "frames",
                path + ": unknown header key '" + key + "'");
    SequenceHeader h;
    h.width = static_cast<int>(kv_int(kv, "width", path));
    h.height = static_cast<int>(kv_int(kv, "height", path));
    h.px = static_cast<int>(kv_int(kv, "px", path));
    h.py = static_cast<int>(kv_int(kv, "py", path));
    h.frames = static_cast<int>(kv_int(kv, "frames", path));
    require(h.width > 0 && h.height > 0 && h.px > 0 && h.py > 0 && h.frames > 0,
            path + ": header values must be positive");
    require(h.width % h.px == 0 && h.height % h.py == 0,
            path + ": frame size must be a pitch multiple");
    return h;
}

inline void write_raw_sequence(const std::string& raw_path, const std::string& hdr_path,
                               const std::vector<LensletFrame>& frames) {
    require(!frames.empty(), "write_raw_sequence: no frames");
    for (const auto& f : frames) {
        f.validate();
        require(f.grid.origin_x == 0 && f.grid.origin_y == 0,
                "write_raw_sequence: nonzero origin not representable");
        require(f.image.same_size(frames.front().image),
                "write_raw_sequence: frames differ in size");
    }
    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + raw_path);
    for (const auto& f : frames)
        out.write(reinterpret_cast<const char*>(f.image.data.data()),
                  static_cast<std::streamsize>(f.image.data.size()));
    if (!out) throw IoError("write failed: " + raw_path);

    const auto& g = frames.front().grid;
    write_header_sidecar(hdr_path, SequenceHeader{frames.front().image.width,
                                                  frames.front().image.height, g.px, g.py,
                                                  static_cast<int>(frames.size())});
}

inline std::vector<LensletFrame> read_raw_sequence(const std::string& raw_path,
                                                   const std::string& hdr_path) {
    const SequenceHeader h = read_header_sidecar(hdr_path);
    std::ifstream in(raw_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + raw_path);
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0);
    const std::size_t frame_bytes = std::size_t(h.width) * h.height;
    if (static_cast<std::size_t>(size) != frame_bytes * h.frames)
        throw IoError(raw_path + ": size does not match header (" +
                      std::to_string(static_cast<long long>(size)) + " bytes, expected " +
                      std::to_string(frame_bytes * h.frames) + ")");

    const LensletGrid grid{h.px, h.py, h.width / h.px, h.height / h.py, 0, 0};
    std::vector<LensletFrame> frames;
    frames.reserve(h.frames);
    for (int t = 0; t < h.frames; ++t) {
        LensletFrame f{Image8(h.width, h.height), grid};
        in.read(reinterpret_cast<char*>(f.image.data.data()),
                static_cast<std::streamsize>(frame_bytes));
        if (!in) throw IoError(raw_path + ": short read");
        frames.push_back(std::move(f));
    }
    return frames;
}

inline std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

inline void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

// --- PGM ------------------------------------------------------------------

inline void write_pgm(const std::string& path, const Image8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw IoError("write failed: " + path);
}

inline Image8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    auto next_token = [&]() {
        std::string tok;
        for (;;) {
            int c = in.get();
            if (c == EOF) throw IoError(path + ": truncated header");
            if (c == '#') {
                while (c != EOF && c != '\n') c = in.get();
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
    };

    if (next_token() != "P5") throw IoError(path + ": not a binary PGM");
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w <= 0 || h <= 0) throw IoError(path + ": bad dimensions");
    if (maxval != 255) throw IoError(path + ": only maxval 255 supported");

    Image8 img(w, h);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw IoError(path + ": truncated pixel data");
    return img;
}

// --- multiview PGM directory ----------------------------------------------

// Files named view_{u}_{v}_frame_{t}.pgm. The angular grid and frame count
// are discovered from the filenames; every (u, v, t) combination must exist.
inline std::vector<LightField4D> import_multiview_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError(dir + ": not a directory");

    auto make_name = [](int u, int v, int t) {
        return "view_" + std::to_string(u) + "_" + std::to_string(v) + "_frame_" +
               std::to_string(t) + ".pgm";
    };

    int max_u = -1, max_v = -1, max_t = -1;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string name = e.path().filename().string();
        int u, v, t;
        if (std::sscanf(name.c_str(), "view_%d_%d_frame_%d.pgm", &u, &v, &t) == 3 &&
            u >= 0 && v >= 0 && t >= 0 && name == make_name(u, v, t)) {
            max_u = std::max(max_u, u);
            max_v = std::max(max_v, v);
            max_t = std::max(max_t, t);
        }
    }
    if (max_u < 0) throw IoError(dir + ": no view_{u}_{v}_frame_{t}.pgm files found");

    std::vector<LightField4D> frames;
    for (int t = 0; t <= max_t; ++t) {
        LightField4D lf;
        lf.au = max_u + 1;
        lf.av = max_v + 1;
        for (int v = 0; v <= max_v; ++v)
            for (int u = 0; u <= max_u; ++u) {
                const std::string name = make_name(u, v, t);
                const fs::path p = fs::path(dir) / name;
                if (!fs::exists(p)) throw IoError(dir + ": missing " + name);
                lf.views.push_back(read_pgm(p.string()));
            }
        lf.validate();
        require(frames.empty() || (lf.ns() == frames.front().ns() &&
                                   lf.nt() == frames.front().nt()),
                dir + ": view size changes between frames");
        frames.push_back(std::move(lf));
    }
    return frames;
}

inline void export_multiview_dir(const std::string& dir,
                                 const std::vector<LightField4D>& frames) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t t = 0; t < frames.size(); ++t)
        for (int v = 0; v < frames[t].av; ++v)
            for (int u = 0; u < frames[t].au; ++u) {
                const std::string name = "view_" + std::to_string(u) + "_" +
                                         std::to_string(v) + "_frame_" +
                                         std::to_string(t) + ".pgm";
                write_pgm((fs::path(dir) / name).string(), frames[t].view(u, v));
            }
}

// --- ground truth csv -------------------------------------------------------

// ds/dt are written in micro-image units (st length divided by pitch).
inline void write_truth_csv(const std::string& path, const std::vector<GroundTruth>& truth,
                            double p_s, double p_t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "frame,ds,dt\n";
    char buf[96];
    for (std::size_t t = 0; t < truth.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", t, truth[t].ds / p_s,
                      truth[t].dt / p_t);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

// Unified ingest: a directory is treated as multiview PGM, anything else as a
// raw lenslet file with its key=value sidecar.
inline std::vector<LensletFrame> ingest(const std::string& input,
                                        const std::string& header_path = {}) {
    if (std::filesystem::is_directory(input)) {
        std::vector<LensletFrame> frames;
        for (const LightField4D& lf : import_multiview_dir(input))
            frames.push_back(multiview_to_lenslet(lf));
        return frames;
    }
    std::string hdr = header_path;
    if (hdr.empty()) {
        hdr = input;
        const auto dot = hdr.find_last_of('.');
        if (dot != std::string::npos) hdr.resize(dot);
        hdr += ".hdr";
    }
    return read_raw_sequence(input, hdr);
}

} // namespace raylf
