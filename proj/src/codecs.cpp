#include "shardlab/codecs.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace shardlab {

namespace {

void require_positive(std::span<const std::uint64_t> values)
{
    for (auto v : values) {
        if (v < 1)
            throw Error("codec input values must be positive");
    }
}

// Bits needed to store value - 1 in the PFor payload.
unsigned needed_width(std::uint64_t value)
{
    return static_cast<unsigned>(std::bit_width(value - 1));
}

std::uint64_t low_bits(std::uint64_t value, unsigned width)
{
    return width >= 64 ? value : value & ((std::uint64_t{1} << width) - 1);
}

std::size_t required_hits(std::size_t length)
{
    // ceil(0.9 * length) in exact arithmetic.
    return (9 * length + 9) / 10;
}

template <typename Block>
void for_each_block(std::size_t count, Block&& block)
{
    for (std::size_t begin = 0; begin < count; begin += PForParams::block)
        block(begin, std::min(PForParams::block, count - begin));
}

} // namespace

Codec parse_codec(std::string_view name)
{
    if (name == "delta")
        return Codec::delta;
    if (name == "pfd" || name == "pfordelta")
        return Codec::pfordelta;
    throw Error(fmt::format("unknown codec '{}'", name));
}

std::string_view codec_name(Codec codec)
{
    return codec == Codec::delta ? "delta" : "pfd";
}

void BitSequence::push_bit(bool bit)
{
    if (size_ % 64 == 0)
        words_.push_back(0);
    if (bit)
        words_.back() |= std::uint64_t{1} << (63 - size_ % 64);
    ++size_;
}

void BitSequence::push_bits(std::uint64_t value, unsigned width)
{
    for (unsigned i = width; i-- > 0;)
        push_bit((value >> i) & 1U);
}

bool BitReader::read_bit()
{
    if (pos_ >= bits_.size())
        throw Error("corrupt bit stream: read past end");
    return bits_.bit(pos_++);
}

std::uint64_t BitReader::read_bits(unsigned width)
{
    std::uint64_t value = 0;
    for (unsigned i = 0; i < width; ++i)
        value = (value << 1) | static_cast<std::uint64_t>(read_bit());
    return value;
}

std::uint64_t gamma_len(std::uint64_t k)
{
    if (k < 1)
        throw Error("gamma code needs a positive integer");
    return 1 + 2 * std::uint64_t{floor_log2(k)};
}

std::uint64_t delta_len(std::uint64_t k)
{
    if (k < 1)
        throw Error("delta code needs a positive integer");
    std::uint64_t log_k = floor_log2(k);
    return 1 + log_k + 2 * std::uint64_t{floor_log2(1 + log_k)};
}

void write_gamma(BitSequence& out, std::uint64_t k)
{
    unsigned n = floor_log2(k);
    out.push_bits(0, n);
    out.push_bits(k, n + 1);
}

std::uint64_t read_gamma(BitReader& in)
{
    unsigned zeros = 0;
    while (!in.read_bit()) {
        if (++zeros > 63)
            throw Error("corrupt bit stream: gamma prefix too long");
    }
    return (std::uint64_t{1} << zeros) | in.read_bits(zeros);
}

void write_delta(BitSequence& out, std::uint64_t k)
{
    auto length = static_cast<unsigned>(std::bit_width(k));
    write_gamma(out, length);
    out.push_bits(k, length - 1);
}

std::uint64_t read_delta(BitReader& in)
{
    std::uint64_t length = read_gamma(in);
    if (length > 64)
        throw Error("corrupt bit stream: delta length exceeds 64 bits");
    auto width = static_cast<unsigned>(length - 1);
    std::uint64_t top = width >= 64 ? 0 : std::uint64_t{1} << width;
    return top | in.read_bits(width);
}

BitSequence delta_encode(std::span<const std::uint64_t> values)
{
    require_positive(values);
    BitSequence bits;
    for (auto v : values)
        write_delta(bits, v);
    return bits;
}

std::vector<std::uint64_t> delta_decode(const BitSequence& bits, std::size_t count)
{
    BitReader in(bits);
    std::vector<std::uint64_t> values;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        values.push_back(read_delta(in));
    return values;
}

std::uint64_t delta_size(std::span<const std::uint64_t> values)
{
    std::uint64_t total = 0;
    for (auto v : values)
        total += delta_len(v);
    return total;
}

unsigned pfor_width(std::span<const std::uint64_t> block)
{
    if (block.empty())
        return 0;
    std::vector<unsigned> widths;
    widths.reserve(block.size());
    for (auto v : block) {
        if (v < 1 || v - 1 > 0xffffffffULL)
            throw Error(fmt::format("value {} outside the PForDelta range [1, 2^32]", v));
        widths.push_back(needed_width(v));
    }
    auto nth = widths.begin() + static_cast<std::ptrdiff_t>(required_hits(block.size()) - 1);
    std::nth_element(widths.begin(), nth, widths.end());
    return *nth;
}

std::uint64_t pfordelta_size(std::span<const std::uint64_t> values)
{
    require_positive(values);
    std::uint64_t total = 0;
    for_each_block(values.size(), [&](std::size_t begin, std::size_t length) {
        auto block = values.subspan(begin, length);
        if (length < PForParams::min_block) {
            total += delta_size(block);
            return;
        }
        unsigned width = pfor_width(block);
        total += PForParams::header_bits + length * width;
        std::size_t last = 0;
        for (std::size_t i = 0; i < length; ++i) {
            if (needed_width(block[i]) <= width)
                continue;
            total += gamma_len(i + 1 - last);
            total += delta_len(((block[i] - 1) >> width) + 1);
            last = i + 1;
        }
    });
    return total;
}

BitSequence pfordelta_encode(std::span<const std::uint64_t> values)
{
    require_positive(values);
    BitSequence bits;
    for_each_block(values.size(), [&](std::size_t begin, std::size_t length) {
        auto block = values.subspan(begin, length);
        if (length < PForParams::min_block) {
            for (auto v : block)
                write_delta(bits, v);
            return;
        }
        unsigned width = pfor_width(block);
        std::vector<std::size_t> exceptions;
        for (std::size_t i = 0; i < length; ++i) {
            if (needed_width(block[i]) > width)
                exceptions.push_back(i);
        }
        bits.push_bits(width, 6);
        bits.push_bits(exceptions.size(), 10);
        for (auto v : block)
            bits.push_bits(low_bits(v - 1, width), width);
        std::size_t last = 0;
        for (auto i : exceptions) {
            write_gamma(bits, i + 1 - last);
            last = i + 1;
        }
        for (auto i : exceptions)
            write_delta(bits, ((block[i] - 1) >> width) + 1);
    });
    return bits;
}

std::vector<std::uint64_t> pfordelta_decode(const BitSequence& bits, std::size_t count)
{
    BitReader in(bits);
    std::vector<std::uint64_t> values;
    values.reserve(count);
    for_each_block(count, [&](std::size_t, std::size_t length) {
        if (length < PForParams::min_block) {
            for (std::size_t i = 0; i < length; ++i)
                values.push_back(read_delta(in));
            return;
        }
        auto width = static_cast<unsigned>(in.read_bits(6));
        auto n_exceptions = in.read_bits(10);
        if (width > PForParams::max_width || n_exceptions > length)
            throw Error("corrupt bit stream: invalid PForDelta block header");
        std::vector<std::uint64_t> stored(length);
        for (auto& s : stored)
            s = in.read_bits(width);
        std::vector<std::size_t> positions;
        std::size_t last = 0;
        for (std::uint64_t e = 0; e < n_exceptions; ++e) {
            std::size_t pos = last + read_gamma(in) - 1;
            if (pos >= length)
                throw Error("corrupt bit stream: exception position out of block");
            positions.push_back(pos);
            last = pos + 1;
        }
        for (auto pos : positions) {
            std::uint64_t high = read_delta(in) - 1;
            stored[pos] |= high << width;
        }
        for (auto s : stored)
            values.push_back(s + 1);
    });
    return values;
}

std::uint64_t encoded_size(Codec codec, std::span<const std::uint64_t> values)
{
    return codec == Codec::delta ? delta_size(values) : pfordelta_size(values);
}

std::vector<std::uint64_t> to_gaps(std::span<const std::uint32_t> docids)
{
    std::vector<std::uint64_t> gaps;
    gaps.reserve(docids.size());
    std::uint64_t previous = 0;
    for (auto d : docids) {
        if (d <= previous)
            throw Error("docids must be positive and strictly ascending");
        gaps.push_back(d - previous);
        previous = d;
    }
    return gaps;
}

std::vector<std::uint32_t> from_gaps(std::span<const std::uint64_t> gaps)
{
    std::vector<std::uint32_t> docids;
    docids.reserve(gaps.size());
    std::uint64_t current = 0;
    for (auto g : gaps) {
        current += g;
        docids.push_back(static_cast<std::uint32_t>(current));
    }
    return docids;
}

std::uint64_t postings_size(std::span<const std::uint32_t> docids, Codec codec)
{
    if (codec == Codec::delta) {
        std::uint64_t total = 0;
        std::uint64_t previous = 0;
        for (auto d : docids) {
            if (d <= previous)
                throw Error("docids must be positive and strictly ascending");
            total += delta_len(d - previous);
            previous = d;
        }
        return total;
    }
    auto gaps = to_gaps(docids);
    return pfordelta_size(gaps);
}

} // namespace shardlab
