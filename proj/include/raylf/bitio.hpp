#pragma once

#include <cstdint>
#include <vector>

#include "error.hpp"

namespace raylf {

// MSB-first bit packing.
class BitWriter {
public:
    void put_bit(int b) {
        acc_ = (acc_ << 1) | (b & 1);
        if (++nbits_ == 8) {
            bytes_.push_back(static_cast<std::uint8_t>(acc_));
            acc_ = 0;
            nbits_ = 0;
        }
    }

    void put_bits(std::uint64_t v, int n) {
        for (int i = n - 1; i >= 0; --i) put_bit(static_cast<int>((v >> i) & 1));
    }

    void byte_align() {
        while (nbits_ != 0) put_bit(0);
    }

    // Order-0 Exp-Golomb, unsigned.
    void put_ue(std::uint64_t v) {
        const std::uint64_t x = v + 1;
        int n = 0;
        while ((x >> n) > 1) ++n;  // n = floor(log2(x))
        put_bits(0, n);
        put_bits(x, n + 1);
    }

    // Signed mapping, negatives first: 0,-1,1,-2,2 -> 0,1,2,3,4.
    void put_se(std::int64_t v) {
        put_ue(v < 0 ? static_cast<std::uint64_t>(-2 * v - 1)
                     : static_cast<std::uint64_t>(2 * v));
    }

    const std::vector<std::uint8_t>& take() {
        byte_align();
        return bytes_;
    }

    std::size_t bit_count() const { return bytes_.size() * 8 + nbits_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint32_t acc_ = 0;
    int nbits_ = 0;
};

class BitReader {
public:
    explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    int get_bit() {
        if (pos_ >= bytes_.size() * 8)
            throw DecodeError("bitstream truncated", byte_offset());
        const int b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
        ++pos_;
        return b;
    }

    std::uint64_t get_bits(int n) {
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<unsigned>(get_bit());
        return v;
    }

    std::uint64_t get_ue() {
        int zeros = 0;
        while (get_bit() == 0)
            if (++zeros > 63) throw DecodeError("exp-golomb prefix too long", byte_offset());
        const std::uint64_t rest = get_bits(zeros);
        return ((std::uint64_t{1} << zeros) | rest) - 1;
    }

    std::int64_t get_se() {
        const std::uint64_t u = get_ue();
        return (u & 1) ? -static_cast<std::int64_t>((u + 1) / 2)
                       : static_cast<std::int64_t>(u / 2);
    }

    void byte_align() { pos_ = (pos_ + 7) & ~std::size_t{7}; }

    std::size_t byte_offset() const { return pos_ >> 3; }
    std::size_t bit_pos() const { return pos_; }
    bool exhausted() const { return pos_ >= bytes_.size() * 8; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

// Bit cost of a value under the unsigned / signed Exp-Golomb codes.
inline int ue_length(std::uint64_t v) {
    const std::uint64_t x = v + 1;
    int n = 0;
    while ((x >> n) > 1) ++n;
    return 2 * n + 1;
}

inline int se_length(std::int64_t v) {
    return ue_length(v < 0 ? static_cast<std::uint64_t>(-2 * v - 1)
                           : static_cast<std::uint64_t>(2 * v));
}

} // namespace raylf
