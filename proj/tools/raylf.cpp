// Command line front end: synthesize test light fields, encode/decode the
// lenslet bitstream, and run rate-distortion evaluations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <raylf/raylf.hpp>

namespace {

using namespace raylf;

Vec2 parse_vec2(const std::string& s, const std::string& what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw IoError(what + ": expected 'x,y', got '" + s + "'");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw IoError(what + ": bad number in '" + s + "'");
    }
}

std::vector<Vec2> parse_path(const std::string& s, const std::string& what) {
    std::vector<Vec2> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_vec2(item, what));
    if (out.empty()) throw IoError(what + ": empty path");
    return out;
}

std::string default_header_path(const std::string& raw) {
    std::string h = raw;
    const auto dot = h.find_last_of('.');
    if (dot != std::string::npos) h.resize(dot);
    return h + ".hdr";
}

int cmd_synth(const std::string& config_path, std::string out, std::string header,
              std::string truth_path) {
    const auto kv = parse_kv_file(config_path);
    const std::string what = config_path;

    auto opt_int = [&](const char* k, long def) {
        return kv.count(k) ? kv_int(kv, k, what) : def;
    };
    auto opt_double = [&](const char* k, double def) {
        return kv.count(k) ? kv_double(kv, k, what) : def;
    };

    CameraModel cam;
    cam.optics.f_lens = opt_double("f_lens", 128.0);
    cam.optics.f_mu = opt_double("f_mu", 1.0);
    cam.optics.p_s = opt_double("p_s", 1.0);
    cam.optics.p_t = opt_double("p_t", 1.0);
    cam.focal = opt_double("focal", 64.0);
    cam.u_step = opt_double("u_step", 1.0);

    const int views = static_cast<int>(opt_int("views", 8));
    LensletGrid grid;
    grid.px = grid.py = views;
    grid.ns = static_cast<int>(opt_int("ns", 64));
    grid.nt = static_cast<int>(opt_int("nt", grid.ns));

    SceneParams sp;
    sp.seed = static_cast<std::uint64_t>(opt_int("seed", 1));
    sp.depth = opt_double("depth", conjugate_depth(cam) * 1.05);
    sp.components = static_cast<int>(opt_int("components", 12));
    sp.amp = opt_double("amp", 110.0);
    sp.min_freq = opt_double("min_freq", 0.04);
    sp.max_freq = opt_double("max_freq", 0.30);
    sp.tex_margin = opt_double("tex_margin", 0.0);
    sp.tex_taper = opt_double("tex_taper", 8.0);

    const int frames = static_cast<int>(opt_int("frames", 8));
    require(frames >= 1, what + ": frames must be >= 1");

    std::vector<Vec2> deltas{{0, 0}};
    if (kv.count("path")) deltas = parse_path(kv.at("path"), what);
    const std::string units = kv.count("path_units") ? kv.at("path_units") : "ray";
    require(units == "ray" || units == "length", what + ": path_units must be ray|length");

    // ray units: micro-image steps per frame; convert to object-plane length
    const double kx = units == "ray" ? cam.optics.p_s * sp.depth / cam.optics.f_lens : 1.0;
    const double ky = units == "ray" ? cam.optics.p_t * sp.depth / cam.optics.f_lens : 1.0;

    std::vector<Vec2> path(static_cast<std::size_t>(frames));
    for (int t = 1; t < frames; ++t) {
        const Vec2 d = deltas[(t - 1) % deltas.size()];
        path[t] = {d.x * kx, d.y * ky};
    }

    const PlanarScene scene = make_planar_scene(cam, grid, sp);
    const RenderedSequence seq = render_sequence(scene, cam, grid, path);

    if (header.empty()) header = default_header_path(out);
    write_raw_sequence(out, header, seq.frames);
    if (!truth_path.empty())
        write_truth_csv(truth_path, seq.truth, cam.optics.p_s, cam.optics.p_t);

    std::printf("synthesized %d frames %dx%d (pitch %dx%d) -> %s\n", frames,
                seq.frames.front().image.width, seq.frames.front().image.height, grid.px,
                grid.py, out.c_str());
    return 0;
}

int cmd_encode(const std::string& input, const std::string& header, int qp,
               const std::string& mode, const std::string& precision, int block_size,
               int window, bool intra_fallback, double lambda, const std::string& out) {
    CodecConfig cc;
    cc.qp = qp;
    cc.block_size = block_size;
    cc.window = window;
    if (lambda >= 0) cc.lambda_override = lambda;

    if (mode == "ray")
        cc.mc_mode = intra_fallback ? McMode::RayIntra : McMode::Ray;
    else if (mode == "conv")
        cc.mc_mode = McMode::Conventional;
    else
        throw IoError("encode: --mode must be ray|conv");

    if (precision == "integer")
        cc.precision = Precision::Integer;
    else if (precision == "half")
        cc.precision = Precision::Half;
    else if (precision == "quarter")
        cc.precision = Precision::Quarter;
    else
        throw IoError("encode: --precision must be integer|half|quarter");

    const std::vector<LensletFrame> frames = ingest(input, header);
    const EncodeResult enc = encode_sequence(frames, cc);
    write_binary_file(out, enc.bytes);

    std::printf("encoded %zu frames -> %zu bytes (%.1f bits/frame), recon psnr %.4f dB\n",
                frames.size(), enc.bytes.size(),
                double(enc.bytes.size()) * 8 / double(frames.size()),
                sequence_psnr(frames, enc.recon));
    return 0;
}

int cmd_decode(const std::string& in, std::string out, std::string header) {
    const DecodeResult dec = decode_sequence(read_binary_file(in));
    if (header.empty()) header = default_header_path(out);
    write_raw_sequence(out, header, dec.frames);
    std::printf("decoded %zu frames %dx%d -> %s\n", dec.frames.size(), dec.header.width,
                dec.header.height, out.c_str());
    return 0;
}

int cmd_psnr(const std::string& ref, const std::string& ref_header, const std::string& test,
             const std::string& test_header) {
    const auto a = ingest(ref, ref_header);
    const auto b = ingest(test, test_header);
    const double v = sequence_psnr(a, b);
    if (std::isinf(v))
        std::printf("lossless\n");
    else
        std::printf("psnr_db=%.6f\n", v);
    return 0;
}

// Two-column csv: bits_per_frame,psnr_db. A header row is skipped if present.
RDCurve load_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    RDCurve c;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double bits, db;
        if (std::sscanf(line.c_str(), "%lf,%lf", &bits, &db) == 2)
            c.points.push_back({bits, db});
    }
    require(!c.points.empty(), path + ": no rate/psnr rows");
    std::sort(c.points.begin(), c.points.end(),
              [](const RDPoint& a, const RDPoint& b) { return a.bits < b.bits; });
    return c;
}

int cmd_bdrate(const std::string& anchor_path, const std::string& test_path) {
    const RDCurve anchor = load_curve_csv(anchor_path);
    const RDCurve test = load_curve_csv(test_path);
    std::printf("bd_rate_pct=%.6f\n", bd_rate(anchor, test));
    return 0;
}

int cmd_sweep(const std::string& input, const std::string& header, const std::string& out,
              const std::vector<int>& qps, const std::string& variants,
              const std::string& anchor, int block_size, int window) {
    SweepConfig cfg;
    if (!qps.empty()) cfg.qps = qps;
    cfg.anchor = anchor;
    cfg.block_size = block_size;
    cfg.window = window;

    if (!variants.empty()) {
        cfg.variants.clear();
        std::stringstream ss(variants);
        std::string name;
        while (std::getline(ss, name, ',')) {
            bool known = false;
            for (const auto& v : default_variants())
                if (v.name == name) {
                    cfg.variants.push_back(v);
                    known = true;
                }
            require(known, "sweep: unknown variant '" + name +
                               "' (expected ray_quarter|ray_half|ray_integer|conv)");
        }
    }

    const std::vector<LensletFrame> frames = ingest(input, header);
    const SweepReport rep = run_rd_experiment(frames, cfg);

    std::ofstream os(out);
    if (!os) throw IoError("cannot write " + out);
    os << rep.csv();
    if (!os) throw IoError("write failed: " + out);

    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& b : rep.bd)
        std::printf("bd_rate %s vs %s: %+.4f%%\n", b.variant.c_str(), b.anchor.c_str(),
                    b.percent);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lenslet plenoptic video toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "render a synthetic lenslet sequence");
    std::string sy_config, sy_out, sy_header, sy_truth;
    synth->add_option("--config", sy_config, "key=value scene description")->required();
    synth->add_option("--out", sy_out, "output raw lenslet file")->required();
    synth->add_option("--header", sy_header, "header sidecar (default: out with .hdr)");
    synth->add_option("--truth", sy_truth, "ground-truth csv to write");

    // encode
    auto* enc = app.add_subcommand("encode", "encode a lenslet sequence");
    std::string en_in, en_hdr, en_mode = "ray", en_prec = "quarter", en_out;
    int en_qp = 30, en_bs = 16, en_win = 8;
    bool en_fallback = false;
    double en_lambda = -1;
    enc->add_option("--input", en_in, "raw lenslet file or multiview pgm directory")
        ->required();
    enc->add_option("--header", en_hdr, "header sidecar (default: input with .hdr)");
    enc->add_option("--qp", en_qp, "quantization parameter 0..51")->required();
    enc->add_option("--mode", en_mode, "ray|conv");
    enc->add_option("--precision", en_prec, "integer|half|quarter");
    enc->add_option("--block-size", en_bs, "coding block size (8,16,32,64)");
    enc->add_option("--window", en_win, "search window in micro-images");
    enc->add_flag("--intra-fallback", en_fallback, "allow per-block intra in ray mode");
    enc->add_option("--lambda", en_lambda, "override rate-distortion lambda");
    enc->add_option("--out", en_out, "output bitstream")->required();

    // decode
    auto* dec = app.add_subcommand("decode", "decode a bitstream");
    std::string de_in, de_out, de_hdr;
    dec->add_option("--in", de_in, "input bitstream")->required();
    dec->add_option("--out", de_out, "output raw lenslet file")->required();
    dec->add_option("--header", de_hdr, "header sidecar (default: out with .hdr)");

    // psnr
    auto* ps = app.add_subcommand("psnr", "sequence psnr between two inputs");
    std::string ps_ref, ps_ref_hdr, ps_test, ps_test_hdr;
    ps->add_option("--ref", ps_ref, "reference input")->required();
    ps->add_option("--ref-header", ps_ref_hdr, "reference header sidecar");
    ps->add_option("--test", ps_test, "test input")->required();
    ps->add_option("--test-header", ps_test_hdr, "test header sidecar");

    // bdrate
    auto* bd = app.add_subcommand("bdrate", "bd-rate between two rate/psnr csv files");
    std::string bd_anchor, bd_test;
    bd->add_option("--anchor", bd_anchor, "anchor curve csv (bits_per_frame,psnr_db)")
        ->required();
    bd->add_option("--test", bd_test, "test curve csv")->required();

    // sweep
    auto* sw = app.add_subcommand("sweep", "rate-distortion sweep over variants and qps");
    std::string sw_in, sw_hdr, sw_out, sw_variants, sw_anchor = "conv";
    std::vector<int> sw_qps;
    int sw_bs = 16, sw_win = 8;
    sw->add_option("--input", sw_in, "raw lenslet file or multiview pgm directory")
        ->required();
    sw->add_option("--header", sw_hdr, "header sidecar");
    sw->add_option("--out", sw_out, "report csv path")->required();
    sw->add_option("--qps", sw_qps, "qp list (default 24 30 36 42)");
    sw->add_option("--variants", sw_variants,
                   "comma list of ray_quarter,ray_half,ray_integer,conv");
    sw->add_option("--anchor", sw_anchor, "anchor variant for bd-rate");
    sw->add_option("--block-size", sw_bs, "coding block size");
    sw->add_option("--window", sw_win, "search window in micro-images");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(sy_config, sy_out, sy_header, sy_truth);
        if (enc->parsed())
            return cmd_encode(en_in, en_hdr, en_qp, en_mode, en_prec, en_bs, en_win,
                              en_fallback, en_lambda, en_out);
        if (dec->parsed()) return cmd_decode(de_in, de_out, de_hdr);
        if (ps->parsed()) return cmd_psnr(ps_ref, ps_ref_hdr, ps_test, ps_test_hdr);
        if (bd->parsed()) return cmd_bdrate(bd_anchor, bd_test);
        if (sw->parsed())
            return cmd_sweep(sw_in, sw_hdr, sw_out, sw_qps, sw_variants, sw_anchor, sw_bs,
                             sw_win);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
