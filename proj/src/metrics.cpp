#include "shardlab/metrics.hpp"

#include <cmath>
#include <iostream>

namespace shardlab {

std::uint64_t postings_size(const PostingsList& list, Codec codec)
{
    return postings_size(std::span<const std::uint32_t>(list.docids), codec);
}

std::uint64_t shard_postings_bits(const ShardIndex& index, Codec codec)
{
    std::uint64_t bits = 0;
    for (const auto& list : index.lists())
        bits += postings_size(list, codec);
    return bits;
}

double overhead_bits(std::span<const ShardIndex> indexes, std::span<const std::uint64_t> per_shard_bits)
{
    if (indexes.size() != per_shard_bits.size())
        throw Error("overhead needs one postings size per shard");
    double total = 0.0;
    for (std::size_t i = 0; i < indexes.size(); ++i) {
        auto terms = indexes[i].dictionary_size();
        if (terms == 0)
            continue;
        if (per_shard_bits[i] == 0) {
            std::clog << "warning: shard " << indexes[i].shard_id()
                      << " has a dictionary but no postings bits; overhead clamped to 0\n";
            continue;
        }
        total += static_cast<double>(terms) * std::log2(static_cast<double>(per_shard_bits[i]));
    }
    return total;
}

double overhead_bits(std::span<const ShardIndex> indexes, Codec codec)
{
    std::vector<std::uint64_t> bits;
    bits.reserve(indexes.size());
    for (const auto& index : indexes)
        bits.push_back(shard_postings_bits(index, codec));
    return overhead_bits(indexes, bits);
}

SizeReport bits_per_posting(std::span<const ShardIndex> indexes, Codec codec)
{
    SizeReport report;
    report.per_shard_bits.reserve(indexes.size());
    for (const auto& index : indexes) {
        report.per_shard_bits.push_back(shard_postings_bits(index, codec));
        report.total_bits += report.per_shard_bits.back();
        report.postings += index.posting_count();
    }
    if (report.postings == 0)
        throw Error("bits per posting is undefined for an index without postings");
    report.overhead_bits = overhead_bits(indexes, report.per_shard_bits);
    auto n = static_cast<double>(report.postings);
    report.bpp = static_cast<double>(report.total_bits) / n;
    report.bpp_oh = (static_cast<double>(report.total_bits) + report.overhead_bits) / n;
    return report;
}

} // namespace shardlab
