#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "codec.hpp"
#include "metrics.hpp"

namespace raylf {

struct VariantSpec {
    std::string name;
    McMode mode = McMode::Ray;
    Precision precision = Precision::Quarter;
};

inline std::vector<VariantSpec> default_variants() {
    return {{"ray_quarter", McMode::Ray, Precision::Quarter},
            {"ray_half", McMode::Ray, Precision::Half},
            {"ray_integer", McMode::Ray, Precision::Integer},
            {"conv", McMode::Conventional, Precision::Quarter}};
}

struct SweepConfig {
    std::vector<int> qps = {24, 30, 36, 42};
    std::vector<VariantSpec> variants = default_variants();
    std::string anchor = "conv";
    int block_size = 16;
    int window = 8;
};

struct SweepCell {
    std::string variant;
    int qp = 0;
    long long bits = 0;
    double bits_per_frame = 0;
    double psnr = 0;
    double seconds = 0;  // wall clock, excluded from determinism guarantees
};

struct BdRow {
    std::string variant;
    std::string anchor;
    double percent = 0;
};

struct SweepReport {
    std::vector<SweepCell> cells;
    std::vector<BdRow> bd;
    std::vector<std::string> warnings;

    RDCurve curve(const std::string& variant) const {
        RDCurve c;
        for (const auto& cell : cells)
            if (cell.variant == variant) c.points.push_back({cell.bits_per_frame, cell.psnr});
        std::sort(c.points.begin(), c.points.end(),
                  [](const RDPoint& a, const RDPoint& b) { return a.bits < b.bits; });
        return c;
    }

    std::string csv() const {
        std::string out = "kind,variant,qp,bits_per_frame,psnr_db,encode_seconds,bd_rate_pct\n";
        char buf[192];
        for (const auto& c : cells) {
            if (std::isinf(c.psnr))
                std::snprintf(buf, sizeof buf, "point,%s,%d,%.3f,inf,%.3f,\n",
                              c.variant.c_str(), c.qp, c.bits_per_frame, c.seconds);
            else
                std::snprintf(buf, sizeof buf, "point,%s,%d,%.3f,%.6f,%.3f,\n",
                              c.variant.c_str(), c.qp, c.bits_per_frame, c.psnr, c.seconds);
            out += buf;
        }
        for (const auto& b : bd) {
            std::snprintf(buf, sizeof buf, "bdrate,%s_vs_%s,,,,,%.6f\n", b.variant.c_str(),
                          b.anchor.c_str(), b.percent);
            out += buf;
        }
        return out;
    }
};

// Encode/decode every (variant, qp) cell on the given sequence, measure
// rate and multiview PSNR on the decoded output, then BD-rate each variant
// against the anchor. Deterministic apart from the timing column.
inline SweepReport run_rd_experiment(const std::vector<LensletFrame>& frames,
                                     const SweepConfig& cfg) {
    require(!cfg.variants.empty(), "sweep: no variants");
    require(cfg.qps.size() >= 1, "sweep: no qps");
    for (int qp : cfg.qps) require(qp >= 0 && qp <= kMaxQp, "sweep: qp out of range");

    bool have_anchor = false;
    for (const auto& v : cfg.variants) have_anchor = have_anchor || v.name == cfg.anchor;

    SweepReport rep;
    for (const auto& variant : cfg.variants) {
        for (int qp : cfg.qps) {
            CodecConfig cc;
            cc.qp = qp;
            cc.block_size = cfg.block_size;
            cc.window = cfg.window;
            cc.mc_mode = variant.mode;
            cc.precision = variant.precision;

            const auto t0 = std::chrono::steady_clock::now();
            const EncodeResult enc = encode_sequence(frames, cc);
            const auto t1 = std::chrono::steady_clock::now();

            const DecodeResult dec = decode_sequence(enc.bytes);

            SweepCell cell;
            cell.variant = variant.name;
            cell.qp = qp;
            cell.bits = static_cast<long long>(enc.bytes.size()) * 8;
            cell.bits_per_frame = double(cell.bits) / double(frames.size());
            cell.psnr = sequence_psnr(frames, dec.frames);
            cell.seconds = std::chrono::duration<double>(t1 - t0).count();
            rep.cells.push_back(cell);
        }
    }

    if (have_anchor && cfg.qps.size() >= 4) {
        const RDCurve anchor = rep.curve(cfg.anchor);
        if (auto w = validate_curve(anchor)) rep.warnings.push_back(cfg.anchor + ": " + *w);
        for (const auto& variant : cfg.variants) {
            if (variant.name == cfg.anchor) continue;
            const RDCurve c = rep.curve(variant.name);
            if (auto w = validate_curve(c)) rep.warnings.push_back(variant.name + ": " + *w);
            rep.bd.push_back({variant.name, cfg.anchor, bd_rate(anchor, c)});
        }
    }
    return rep;
}

} // namespace raylf
