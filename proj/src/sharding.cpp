#include "shardlab/sharding.hpp"

#include <ostream>

#include <fmt/core.h>

#include "shardlab/random.hpp"

namespace shardlab {

namespace {

void require_shards(std::uint32_t m)
{
    if (m < 1)
        throw Error("shard count must be at least 1");
}

ShardAssignment slice_sequence(Policy policy, const std::vector<DocKey>& sequence, std::uint32_t m,
                               std::uint64_t seed)
{
    require_shards(m);
    std::vector<ShardId> shard_of(sequence.size());
    for (std::size_t rank = 0; rank < sequence.size(); ++rank) {
        DocKey key = sequence[rank];
        if (key >= shard_of.size())
            throw Error("slicing needs an ordering over the whole corpus");
        shard_of[key] = slice_of(rank, sequence.size(), m);
    }
    return {policy, m, seed, std::move(shard_of)};
}

} // namespace

Policy parse_policy(std::string_view name)
{
    if (name == "random")
        return Policy::random;
    if (name == "round-robin")
        return Policy::round_robin;
    if (name == "url-slice")
        return Policy::url_slice;
    if (name == "ih-url-slice")
        return Policy::ih_url_slice;
    if (name == "m-slice")
        return Policy::m_slice;
    throw Error(fmt::format("unknown distribution policy '{}'", name));
}

std::string_view policy_name(Policy policy)
{
    switch (policy) {
    case Policy::random:
        return "random";
    case Policy::round_robin:
        return "round-robin";
    case Policy::url_slice:
        return "url-slice";
    case Policy::ih_url_slice:
        return "ih-url-slice";
    case Policy::m_slice:
        return "m-slice";
    }
    return "?";
}

ShardAssignment::ShardAssignment(Policy policy, std::uint32_t m, std::uint64_t seed,
                                 std::vector<ShardId> shard_of)
    : policy_(policy), m_(m), seed_(seed), shard_of_(std::move(shard_of))
{
    require_shards(m);
    for (auto shard : shard_of_) {
        if (shard >= m)
            throw Error(fmt::format("shard id {} out of range for m={}", shard, m));
    }
}

std::vector<std::vector<DocKey>> ShardAssignment::members() const
{
    std::vector<std::vector<DocKey>> shards(m_);
    for (DocKey key = 0; key < shard_of_.size(); ++key)
        shards[shard_of_[key]].push_back(key);
    return shards;
}

std::vector<std::size_t> ShardAssignment::shard_sizes() const
{
    std::vector<std::size_t> sizes(m_, 0);
    for (auto shard : shard_of_)
        ++sizes[shard];
    return sizes;
}

ShardAssignment distribute_random(const Corpus& corpus, std::uint32_t m, std::uint64_t seed)
{
    require_shards(m);
    using u128 = unsigned __int128;
    const std::uint64_t salt = mix64(seed);
    std::vector<ShardId> shard_of(corpus.size());
    for (DocKey key = 0; key < shard_of.size(); ++key)
        shard_of[key] = static_cast<ShardId>((u128(mix64(key ^ salt)) * m) >> 64);
    return {Policy::random, m, seed, std::move(shard_of)};
}

ShardAssignment distribute_round_robin(const Corpus& corpus, std::uint32_t m)
{
    require_shards(m);
    std::vector<ShardId> shard_of(corpus.size());
    for (DocKey key = 0; key < shard_of.size(); ++key)
        shard_of[key] = key % m;
    return {Policy::round_robin, m, 0, std::move(shard_of)};
}

ShardAssignment distribute_url_slice(const Corpus& corpus, std::uint32_t m)
{
    auto ordering = order_url(corpus, all_documents(corpus));
    return slice_sequence(Policy::url_slice, ordering.sequence(), m, 0);
}

ShardAssignment distribute_ih_url_slice(const Corpus& corpus, std::uint32_t m, std::uint64_t seed)
{
    auto ordering = order_ih_url(corpus, all_documents(corpus), seed);
    return slice_sequence(Policy::ih_url_slice, ordering.sequence(), m, seed);
}

ShardAssignment slice_m(const Ordering& ordering, std::uint32_t m)
{
    return slice_sequence(Policy::m_slice, ordering.sequence(), m, ordering.seed());
}

ShardAssignment distribute(Policy policy, const Corpus& corpus, std::uint32_t m, std::uint64_t seed)
{
    switch (policy) {
    case Policy::random:
        return distribute_random(corpus, m, seed);
    case Policy::round_robin:
        return distribute_round_robin(corpus, m);
    case Policy::url_slice:
        return distribute_url_slice(corpus, m);
    case Policy::ih_url_slice:
        return distribute_ih_url_slice(corpus, m, seed);
    case Policy::m_slice:
        break;
    }
    throw Error("m-slice partitioning needs a global ordering; use slice_m");
}

void write_assignment_csv(std::ostream& out, const ShardAssignment& assignment)
{
    out << "doc_key,shard\n";
    const auto& shard_of = assignment.assignments();
    for (DocKey key = 0; key < shard_of.size(); ++key)
        out << key << ',' << shard_of[key] << '\n';
}

} // namespace shardlab
