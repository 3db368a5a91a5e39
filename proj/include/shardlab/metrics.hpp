#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shardlab/codecs.hpp"
#include "shardlab/indexcore.hpp"

namespace shardlab {

struct SizeReport {
    std::vector<std::uint64_t> per_shard_bits; // P_i
    std::uint64_t total_bits = 0;              // P
    double overhead_bits = 0.0;                // OH
    std::uint64_t postings = 0;                // N
    double bpp = 0.0;                          // P / N
    double bpp_oh = 0.0;                       // (P + OH) / N
};

std::uint64_t postings_size(const PostingsList& list, Codec codec);

// P_i: encoded size of every postings list in the shard.
std::uint64_t shard_postings_bits(const ShardIndex& index, Codec codec);

// OH = sum_i |T_i| * log2(P_i). Shards with P_i <= 1 contribute 0.
double overhead_bits(std::span<const ShardIndex> indexes, std::span<const std::uint64_t> per_shard_bits);
double overhead_bits(std::span<const ShardIndex> indexes, Codec codec);

SizeReport bits_per_posting(std::span<const ShardIndex> indexes, Codec codec);

} // namespace shardlab
