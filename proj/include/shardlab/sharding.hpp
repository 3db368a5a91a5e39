#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "shardlab/common.hpp"
#include "shardlab/corpus.hpp"
#include "shardlab/ordering.hpp"

namespace shardlab {

enum class Policy { random, round_robin, url_slice, ih_url_slice, m_slice };

Policy parse_policy(std::string_view name);
std::string_view policy_name(Policy policy);

// Total map from documents to shards 0..m-1, indexed by doc_key.
class ShardAssignment {
public:
    ShardAssignment(Policy policy, std::uint32_t m, std::uint64_t seed, std::vector<ShardId> shard_of);

    Policy policy() const { return policy_; }
    std::uint32_t shard_count() const { return m_; }
    std::uint64_t seed() const { return seed_; }
    ShardId shard_of(DocKey key) const { return shard_of_.at(key); }
    const std::vector<ShardId>& assignments() const { return shard_of_; }

    // Documents of each shard in doc_key order.
    std::vector<std::vector<DocKey>> members() const;
    std::vector<std::size_t> shard_sizes() const;

    bool operator==(const ShardAssignment&) const = default;

private:
    Policy policy_;
    std::uint32_t m_;
    std::uint64_t seed_;
    std::vector<ShardId> shard_of_;
};

// Shard of the document at rank r of n under balanced slicing: floor(r*m/n).
constexpr ShardId slice_of(std::uint64_t rank, std::uint64_t n, std::uint32_t m)
{
    return static_cast<ShardId>(rank * m / n);
}

ShardAssignment distribute_random(const Corpus& corpus, std::uint32_t m, std::uint64_t seed);
ShardAssignment distribute_round_robin(const Corpus& corpus, std::uint32_t m);
ShardAssignment distribute_url_slice(const Corpus& corpus, std::uint32_t m);
ShardAssignment distribute_ih_url_slice(const Corpus& corpus, std::uint32_t m, std::uint64_t seed);

// Cuts an ordering of the whole corpus into m consecutive slices.
ShardAssignment slice_m(const Ordering& ordering, std::uint32_t m);

// Dispatch for the document-routing policies. m_slice is not a routing
// policy on its own and is rejected here; use slice_m.
ShardAssignment distribute(Policy policy, const Corpus& corpus, std::uint32_t m, std::uint64_t seed);

void write_assignment_csv(std::ostream& out, const ShardAssignment& assignment);

} // namespace shardlab
