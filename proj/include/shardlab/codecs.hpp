#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "shardlab/common.hpp"

namespace shardlab {

enum class Codec { delta, pfordelta };

Codec parse_codec(std::string_view name);
std::string_view codec_name(Codec codec);

// Block PForDelta parameters.
struct PForParams {
    static constexpr std::size_t block = 128;
    static constexpr double threshold = 0.90;
    static constexpr std::size_t min_block = 64;
    static constexpr unsigned header_bits = 16; // 6 bits width, 10 bits exception count
    static constexpr unsigned max_width = 32;
};

// Append-only bit string, most significant bit of each field first.
class BitSequence {
public:
    void push_bit(bool bit);
    // Appends the low `width` bits of value (width <= 64).
    void push_bits(std::uint64_t value, unsigned width);

    bool bit(std::size_t i) const { return (words_[i / 64] >> (63 - i % 64)) & 1U; }
    std::size_t size() const { return size_; }

    bool operator==(const BitSequence&) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

class BitReader {
public:
    explicit BitReader(const BitSequence& bits) : bits_(bits) {}

    bool read_bit();
    std::uint64_t read_bits(unsigned width);
    std::size_t position() const { return pos_; }
    bool at_end() const { return pos_ == bits_.size(); }

private:
    const BitSequence& bits_;
    std::size_t pos_ = 0;
};

constexpr unsigned floor_log2(std::uint64_t k)
{
    return static_cast<unsigned>(std::bit_width(k)) - 1;
}

// Elias gamma length: 1 + 2*floor(log2 k).
std::uint64_t gamma_len(std::uint64_t k);
// Elias delta length: 1 + floor(log2 k) + 2*floor(log2(1 + floor(log2 k))).
std::uint64_t delta_len(std::uint64_t k);

void write_gamma(BitSequence& out, std::uint64_t k);
std::uint64_t read_gamma(BitReader& in);
void write_delta(BitSequence& out, std::uint64_t k);
std::uint64_t read_delta(BitReader& in);

BitSequence delta_encode(std::span<const std::uint64_t> values);
std::vector<std::uint64_t> delta_decode(const BitSequence& bits, std::size_t count);
std::uint64_t delta_size(std::span<const std::uint64_t> values);

// Smallest width b such that at least ceil(0.9 * |block|) values satisfy
// value - 1 < 2^b.
unsigned pfor_width(std::span<const std::uint64_t> block);

// Size computed from the block layout without encoding.
std::uint64_t pfordelta_size(std::span<const std::uint64_t> values);
BitSequence pfordelta_encode(std::span<const std::uint64_t> values);
std::vector<std::uint64_t> pfordelta_decode(const BitSequence& bits, std::size_t count);

std::uint64_t encoded_size(Codec codec, std::span<const std::uint64_t> values);

// First docId followed by the dGaps.
std::vector<std::uint64_t> to_gaps(std::span<const std::uint32_t> docids);
std::vector<std::uint32_t> from_gaps(std::span<const std::uint64_t> gaps);

std::uint64_t postings_size(std::span<const std::uint32_t> docids, Codec codec);

} // namespace shardlab
