#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "bitio.hpp"
#include "search.hpp"
#include "transform.hpp"

namespace raylf {

enum class McMode : int { Ray = 0, Conventional = 1, RayIntra = 2 };

struct CodecConfig {
    int qp = 30;
    int block_size = 16;
    McMode mc_mode = McMode::Ray;
    int window = 8;
    Precision precision = Precision::Quarter;
    std::optional<double> lambda_override;

    double lambda() const {
        return lambda_override ? *lambda_override : 0.85 * std::exp2((qp - 12) / 3.0);
    }

    void validate() const {
        require(qp >= 0 && qp <= kMaxQp, "codec: qp out of range");
        require(block_size == 8 || block_size == 16 || block_size == 32 ||
                    block_size == 64,
                "codec: block size must be 8, 16, 32 or 64");
        require(window >= 0, "codec: negative search window");
    }
};

struct StreamHeader {
    int version = 1;
    int width = 0;
    int height = 0;
    int px = 0;
    int py = 0;
    int qp = 0;
    int block_size = 0;
    int mc_mode = 0;
    int frame_count = 0;
};

inline constexpr std::uint8_t kMagic[4] = {'R', 'L', 'C', '1'};

enum class BlockMode : int { Intra = 0, InterRay = 1, InterConv = 2 };

struct BlockStats {
    int frame = 0, bx = 0, by = 0;
    BlockMode mode = BlockMode::Intra;
    long long sad = 0;       // prediction SAD of the chosen mode
    int mode_bits = 0;
    int mv_bits = 0;
    int coeff_bits = 0;      // cbf flag + coefficient payload
    ScaledMv mv;             // wire units (quarter steps / quarter pels)
};

struct EncodeStats {
    std::vector<BlockStats> blocks;
    std::vector<long long> frame_bits;

    long long total_mv_bits() const {
        long long s = 0;
        for (const auto& b : blocks) s += b.mv_bits;
        return s;
    }
    long long total_coeff_bits() const {
        long long s = 0;
        for (const auto& b : blocks) s += b.coeff_bits;
        return s;
    }
};

struct EncodeResult {
    std::vector<std::uint8_t> bytes;
    StreamHeader header;
    std::vector<LensletFrame> recon;
    EncodeStats stats;
};

struct DecodeResult {
    StreamHeader header;
    std::vector<LensletFrame> frames;
};

namespace detail {

// Frames are padded twice: up to a block-size multiple (the coded area),
// then up to a pitch multiple so the padded plane still wraps as a
// LensletFrame for the prediction kernels. Both sides derive the same
// geometry from the header, and the strip beyond the coded area is filled
// by border replication after each frame so references match bit for bit.
struct PadInfo {
    int w_cod = 0, h_cod = 0;  // block-aligned coded area
    int w_pad = 0, h_pad = 0;  // pitch-aligned stored plane
    int bx_count = 0, by_count = 0;

    static PadInfo make(int w, int h, int bs, int px, int py) {
        auto round_up = [](int v, int m) { return (v + m - 1) / m * m; };
        PadInfo p;
        p.w_cod = round_up(w, bs);
        p.h_cod = round_up(h, bs);
        p.w_pad = round_up(p.w_cod, px);
        p.h_pad = round_up(p.h_cod, py);
        p.bx_count = p.w_cod / bs;
        p.by_count = p.h_cod / bs;
        return p;
    }
};

inline Image8 pad_image(const Image8& src, int w, int h) {
    Image8 out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = src.at_clamped(x, y);
    return out;
}

inline void fill_pad_border(Image8& img, int w_cod, int h_cod) {
    for (int y = 0; y < h_cod; ++y)
        for (int x = w_cod; x < img.width; ++x) img.at(x, y) = img.at(w_cod - 1, y);
    for (int y = h_cod; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = img.at(x, h_cod - 1);
}

inline int dc_predictor(const Image8& recon, const BlockRect& b) {
    long long sum = 0;
    int n = 0;
    if (b.y > 0)
        for (int x = 0; x < b.w; ++x, ++n) sum += recon.at(b.x + x, b.y - 1);
    if (b.x > 0)
        for (int y = 0; y < b.h; ++y, ++n) sum += recon.at(b.x - 1, b.y + y);
    if (n == 0) return 128;
    return static_cast<int>((sum + n / 2) / n);
}

struct TuLevels {
    CoeffBlock levels;
    bool nonzero = false;
};

// Residual coding for one block: dead-zone quantized 8x8 DCT per transform
// unit, zigzag run-length, order-0 Exp-Golomb.
struct BlockCode {
    std::vector<TuLevels> tus;
    bool cbf = false;
};

inline BlockCode code_residual(const Image8& cur, const Image8& pred,
                               const BlockRect& b, int qp) {
    BlockCode bc;
    for (int ty = 0; ty < b.h; ty += 8)
        for (int tx = 0; tx < b.w; tx += 8) {
            ResidualBlock r;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    r[y * 8 + x] = static_cast<std::int16_t>(
                        int(cur.at(b.x + tx + x, b.y + ty + y)) - int(pred.at(tx + x, ty + y)));
            TuLevels tu;
            tu.levels = transform_quant(r, qp);
            for (int i = 0; i < 64; ++i)
                if (tu.levels[i] != 0) tu.nonzero = true;
            bc.cbf = bc.cbf || tu.nonzero;
            bc.tus.push_back(tu);
        }
    return bc;
}

inline void write_tu(BitWriter& bw, const CoeffBlock& levels) {
    int n = 0;
    for (int i = 0; i < 64; ++i)
        if (levels[kZigzag[i]] != 0) ++n;
    bw.put_ue(static_cast<std::uint64_t>(n));
    int prev = -1;
    for (int i = 0; i < 64; ++i) {
        const int lvl = levels[kZigzag[i]];
        if (lvl == 0) continue;
        bw.put_ue(static_cast<std::uint64_t>(i - prev - 1));
        bw.put_se(lvl);
        prev = i;
    }
}

inline CoeffBlock read_tu(BitReader& br) {
    CoeffBlock levels{};
    const std::uint64_t n = br.get_ue();
    if (n > 64) throw DecodeError("coefficient count exceeds 64", br.byte_offset());
    int pos = -1;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t run = br.get_ue();
        pos += static_cast<int>(run) + 1;
        if (run > 63 || pos > 63)
            throw DecodeError("coefficient run leaves the block", br.byte_offset());
        const std::int64_t lvl = br.get_se();
        if (lvl == 0) throw DecodeError("zero coefficient level coded", br.byte_offset());
        if (lvl > kMaxCoeffLevel || lvl < -kMaxCoeffLevel)
            throw DecodeError("coefficient level out of range", br.byte_offset());
        levels[kZigzag[pos]] = static_cast<std::int32_t>(lvl);
    }
    return levels;
}

// Applies decoded residual TUs onto the prediction and writes recon pixels.
inline void reconstruct_block(Image8& recon, const BlockRect& b, const Image8& pred,
                              const std::vector<CoeffBlock>* tus, int qp) {
    int t = 0;
    for (int ty = 0; ty < b.h; ty += 8)
        for (int tx = 0; tx < b.w; tx += 8) {
            ResidualBlock res{};
            if (tus) res = dequant_itransform((*tus)[t], qp);
            ++t;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    recon.at(b.x + tx + x, b.y + ty + y) =
                        clamp_u8(int(pred.at(tx + x, ty + y)) + res[y * 8 + x]);
        }
}

inline void write_header(BitWriter& bw, const StreamHeader& h) {
    for (std::uint8_t m : kMagic) bw.put_bits(m, 8);
    bw.put_ue(static_cast<std::uint64_t>(h.version));
    bw.put_ue(static_cast<std::uint64_t>(h.width));
    bw.put_ue(static_cast<std::uint64_t>(h.height));
    bw.put_ue(static_cast<std::uint64_t>(h.px));
    bw.put_ue(static_cast<std::uint64_t>(h.py));
    bw.put_ue(static_cast<std::uint64_t>(h.qp));
    bw.put_ue(static_cast<std::uint64_t>(h.block_size));
    bw.put_ue(static_cast<std::uint64_t>(h.mc_mode));
    bw.put_ue(static_cast<std::uint64_t>(h.frame_count));
    bw.byte_align();
}

inline StreamHeader read_header(BitReader& br) {
    for (std::uint8_t m : kMagic)
        if (br.get_bits(8) != m) throw DecodeError("bad magic", 0);
    StreamHeader h;
    auto rd = [&](const char* what, std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t v = br.get_ue();
        if (v < lo || v > hi)
            throw DecodeError(std::string("header field out of range: ") + what,
                              br.byte_offset());
        return static_cast<int>(v);
    };
    h.version = rd("version", 1, 1);
    h.width = rd("width", 1, 1 << 16);
    h.height = rd("height", 1, 1 << 16);
    h.px = rd("px", 1, 1 << 10);
    h.py = rd("py", 1, 1 << 10);
    h.qp = rd("qp", 0, kMaxQp);
    h.block_size = rd("block_size", 8, 64);
    h.mc_mode = rd("mc_mode", 0, 2);
    h.frame_count = rd("frame_count", 1, 1 << 20);
    if (h.block_size != 8 && h.block_size != 16 && h.block_size != 32 &&
        h.block_size != 64)
        throw DecodeError("invalid block size", br.byte_offset());
    if (h.width % h.px != 0 || h.height % h.py != 0)
        throw DecodeError("frame size not a pitch multiple", br.byte_offset());
    if (static_cast<std::int64_t>(h.width) * h.height > (std::int64_t{1} << 26))
        throw DecodeError("frame too large", br.byte_offset());
    br.byte_align();
    return h;
}

} // namespace detail

// Low-delay encoder: frame 0 intra, every later frame predicted from the
// reconstruction of its predecessor (closed loop; the decoder sees the same
// references). Per block the mv predictor is the left neighbor's wire mv if
// that neighbor is inter, else zero.
inline EncodeResult encode_sequence(const std::vector<LensletFrame>& frames,
                                    const CodecConfig& cfg) {
    cfg.validate();
    require(!frames.empty(), "encode: no frames");
    for (const auto& f : frames) {
        f.validate();
        require(f.grid.origin_x == 0 && f.grid.origin_y == 0,
                "encode: nonzero grid origin not representable in the stream");
        require(f.image.same_size(frames.front().image) &&
                    f.grid.px == frames.front().grid.px &&
                    f.grid.py == frames.front().grid.py,
                "encode: frames must share size and grid");
    }

    const LensletGrid& g = frames.front().grid;
    const int bs = cfg.block_size;
    const auto pi =
        detail::PadInfo::make(frames.front().image.width, frames.front().image.height,
                              bs, g.px, g.py);
    const LensletGrid grid_pad{g.px, g.py, pi.w_pad / g.px, pi.h_pad / g.py, 0, 0};
    const double lambda = cfg.lambda();

    SearchConfig scfg;
    scfg.window = cfg.window;
    scfg.precision = cfg.precision;
    scfg.lambda = lambda;

    EncodeResult out;
    out.header = StreamHeader{1,
                              frames.front().image.width,
                              frames.front().image.height,
                              g.px,
                              g.py,
                              cfg.qp,
                              bs,
                              static_cast<int>(cfg.mc_mode),
                              static_cast<int>(frames.size())};

    BitWriter bw;
    detail::write_header(bw, out.header);

    LensletFrame prev;  // padded reconstruction of the previous frame
    for (std::size_t t = 0; t < frames.size(); ++t) {
        LensletFrame cur{detail::pad_image(frames[t].image, pi.w_pad, pi.h_pad), grid_pad};
        Image8 recon(pi.w_pad, pi.h_pad);
        const std::size_t frame_start = bw.bit_count();

        for (int by = 0; by < pi.by_count; ++by) {
            ScaledMv left_mv{};
            bool left_inter = false;
            for (int bx = 0; bx < pi.bx_count; ++bx) {
                const BlockRect b{bx * bs, by * bs, bs, bs};
                const ScaledMv pred = left_inter ? left_mv : ScaledMv{};

                BlockMode mode = BlockMode::Intra;
                ScaledMv wire{};
                Image8 prediction;
                long long mode_sad = 0;

                if (t > 0 && cfg.mc_mode != McMode::RayIntra) {
                    if (cfg.mc_mode == McMode::Ray) {
                        SearchResult r = search_integer(cur, b, prev, scfg, pred);
                        r = refine_fractional(cur, b, prev, r, scfg, pred);
                        mode = BlockMode::InterRay;
                        wire = scale_rmv(r.mv);
                        prediction = predict_fractional(prev, b, r.mv);
                        mode_sad = r.sad;
                    } else {
                        PixelSearchResult r = full_search_conventional(cur, b, prev, scfg, pred);
                        mode = BlockMode::InterConv;
                        wire = ScaledMv{r.mvx_q, r.mvy_q};
                        prediction = predict_conventional(prev, b, r.mvx_q, r.mvy_q);
                        mode_sad = r.sad;
                    }
                } else if (t > 0) {
                    // ray search with per-block intra fallback, rd choice
                    SearchResult r = search_integer(cur, b, prev, scfg, pred);
                    r = refine_fractional(cur, b, prev, r, scfg, pred);
                    const ScaledMv w = scale_rmv(r.mv);
                    const double inter_cost =
                        double(r.sad) + lambda * (2 + detail::mv_rate_bits(w, pred));

                    const int dc = detail::dc_predictor(recon, b);
                    long long intra_sad = 0;
                    for (int y = 0; y < bs; ++y)
                        for (int x = 0; x < bs; ++x) {
                            const int d = int(cur.image.at(b.x + x, b.y + y)) - dc;
                            intra_sad += d < 0 ? -d : d;
                        }
                    const double intra_cost = double(intra_sad) + lambda * 1;

                    if (intra_cost < inter_cost) {
                        mode = BlockMode::Intra;
                        prediction = Image8(bs, bs, static_cast<std::uint8_t>(dc));
                        mode_sad = intra_sad;
                    } else {
                        mode = BlockMode::InterRay;
                        wire = w;
                        prediction = predict_fractional(prev, b, r.mv);
                        mode_sad = r.sad;
                    }
                } else {
                    const int dc = detail::dc_predictor(recon, b);
                    prediction = Image8(bs, bs, static_cast<std::uint8_t>(dc));
                    for (int y = 0; y < bs; ++y)
                        for (int x = 0; x < bs; ++x) {
                            const int d = int(cur.image.at(b.x + x, b.y + y)) - dc;
                            mode_sad += d < 0 ? -d : d;
                        }
                }

                BlockStats st;
                st.frame = static_cast<int>(t);
                st.bx = bx;
                st.by = by;
                st.mode = mode;
                st.sad = mode_sad;
                st.mv = wire;

                std::size_t mark = bw.bit_count();
                if (mode == BlockMode::Intra) {
                    bw.put_bit(0);
                } else {
                    bw.put_bit(1);
                    bw.put_bit(mode == BlockMode::InterConv ? 1 : 0);
                }
                st.mode_bits = static_cast<int>(bw.bit_count() - mark);

                if (mode != BlockMode::Intra) {
                    mark = bw.bit_count();
                    bw.put_se(wire.ds - pred.ds);
                    bw.put_se(wire.dt - pred.dt);
                    st.mv_bits = static_cast<int>(bw.bit_count() - mark);
                    left_mv = wire;
                    left_inter = true;
                } else {
                    left_inter = false;
                }

                mark = bw.bit_count();
                const detail::BlockCode bc = detail::code_residual(cur.image, prediction, b, cfg.qp);
                bw.put_bit(bc.cbf ? 1 : 0);
                std::vector<CoeffBlock> tus;
                if (bc.cbf) {
                    tus.reserve(bc.tus.size());
                    for (const auto& tu : bc.tus) {
                        detail::write_tu(bw, tu.levels);
                        tus.push_back(tu.levels);
                    }
                }
                st.coeff_bits = static_cast<int>(bw.bit_count() - mark);

                detail::reconstruct_block(recon, b, prediction, bc.cbf ? &tus : nullptr,
                                          cfg.qp);
                out.stats.blocks.push_back(st);
            }
        }

        bw.byte_align();
        out.stats.frame_bits.push_back(static_cast<long long>(bw.bit_count() - frame_start));
        detail::fill_pad_border(recon, pi.w_cod, pi.h_cod);

        prev = LensletFrame{std::move(recon), grid_pad};

        LensletFrame exported;
        exported.grid = g;
        exported.image = Image8(out.header.width, out.header.height);
        for (int y = 0; y < out.header.height; ++y)
            for (int x = 0; x < out.header.width; ++x)
                exported.image.at(x, y) = prev.image.at(x, y);
        out.recon.push_back(std::move(exported));
    }

    out.bytes = bw.take();
    return out;
}

inline DecodeResult decode_sequence(const std::vector<std::uint8_t>& bytes) {
    BitReader br(bytes);
    DecodeResult out;
    out.header = detail::read_header(br);
    const StreamHeader& h = out.header;

    const auto pi = detail::PadInfo::make(h.width, h.height, h.block_size, h.px, h.py);
    const LensletGrid grid_pad{h.px, h.py, pi.w_pad / h.px, pi.h_pad / h.py, 0, 0};
    const LensletGrid grid_out{h.px, h.py, h.width / h.px, h.height / h.py, 0, 0};
    const int bs = h.block_size;
    const McMode mc = static_cast<McMode>(h.mc_mode);

    LensletFrame prev;
    for (int t = 0; t < h.frame_count; ++t) {
        Image8 recon(pi.w_pad, pi.h_pad);

        for (int by = 0; by < pi.by_count; ++by) {
            ScaledMv left_mv{};
            bool left_inter = false;
            for (int bx = 0; bx < pi.bx_count; ++bx) {
                const BlockRect b{bx * bs, by * bs, bs, bs};
                const ScaledMv pred = left_inter ? left_mv : ScaledMv{};

                BlockMode mode = BlockMode::Intra;
                if (br.get_bit())
                    mode = br.get_bit() ? BlockMode::InterConv : BlockMode::InterRay;

                if (mode != BlockMode::Intra && t == 0)
                    throw DecodeError("inter block in the intra frame", br.byte_offset());
                if (mode == BlockMode::InterRay && mc == McMode::Conventional)
                    throw DecodeError("ray block in a conventional stream", br.byte_offset());
                if (mode == BlockMode::InterConv && mc != McMode::Conventional)
                    throw DecodeError("conventional block in a ray stream", br.byte_offset());

                Image8 prediction;
                if (mode == BlockMode::Intra) {
                    const int dc = detail::dc_predictor(recon, b);
                    prediction = Image8(bs, bs, static_cast<std::uint8_t>(dc));
                    left_inter = false;
                } else {
                    ScaledMv wire;
                    wire.ds = static_cast<int>(pred.ds + br.get_se());
                    wire.dt = static_cast<int>(pred.dt + br.get_se());
                    if (std::abs(wire.ds) > (1 << 20) || std::abs(wire.dt) > (1 << 20))
                        throw DecodeError("motion vector out of range", br.byte_offset());
                    if (mode == BlockMode::InterRay)
                        prediction = predict_fractional(prev, b, unscale_rmv(wire));
                    else
                        prediction = predict_conventional(prev, b, wire.ds, wire.dt);
                    left_mv = wire;
                    left_inter = true;
                }

                std::vector<CoeffBlock> tus;
                if (br.get_bit()) {
                    const int per_side = bs / 8;
                    tus.reserve(static_cast<std::size_t>(per_side) * per_side);
                    for (int i = 0; i < per_side * per_side; ++i)
                        tus.push_back(detail::read_tu(br));
                }
                detail::reconstruct_block(recon, b, prediction,
                                          tus.empty() ? nullptr : &tus, h.qp);
            }
        }

        br.byte_align();
        detail::fill_pad_border(recon, pi.w_cod, pi.h_cod);
        prev = LensletFrame{std::move(recon), grid_pad};

        LensletFrame exported;
        exported.grid = grid_out;
        exported.image = Image8(h.width, h.height);
        for (int y = 0; y < h.height; ++y)
            for (int x = 0; x < h.width; ++x)
                exported.image.at(x, y) = prev.image.at(x, y);
        out.frames.push_back(std::move(exported));
    }

    if (!br.exhausted()) throw DecodeError("trailing data after last frame", br.byte_offset());
    return out;
}

} // namespace raylf
