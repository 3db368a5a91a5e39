#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "shardlab/common.hpp"
#include "shardlab/corpus.hpp"
#include "shardlab/ordering.hpp"
#include "shardlab/sharding.hpp"

namespace shardlab {

struct PostingsList {
    TermId term = 0;
    std::vector<DocId> docids; // strictly ascending, first >= 1

    bool operator==(const PostingsList&) const = default;
};

// Local inverted index of one shard. Lists are kept sorted by term, so the
// dictionary T_i is the sequence of their terms.
class ShardIndex {
public:
    ShardIndex() = default;
    ShardIndex(ShardId shard, std::uint32_t n_docs, std::vector<PostingsList> lists);

    ShardId shard_id() const { return shard_; }
    std::uint32_t n_docs() const { return n_docs_; }
    const std::vector<PostingsList>& lists() const { return lists_; }
    std::size_t dictionary_size() const { return lists_.size(); }
    std::uint64_t posting_count() const { return postings_; }

    // nullptr when the term is absent from this shard.
    const PostingsList* find(TermId term) const;
    // Postings list length; 0 when absent.
    std::uint64_t length(TermId term) const;

    bool operator==(const ShardIndex&) const = default;

private:
    ShardId shard_ = 0;
    std::uint32_t n_docs_ = 0;
    std::vector<PostingsList> lists_;
    std::uint64_t postings_ = 0;
};

// Indexes the documents of `sequence`, giving sequence[i] local docId i + 1.
ShardIndex build_index(const Corpus& corpus, std::span<const DocKey> sequence, ShardId shard = 0);

// Distribute-then-order: each shard's documents are ordered by `scheme`
// (seeded per shard from `seed`) and indexed.
std::vector<ShardIndex> build_shard_indexes(const Corpus& corpus, const ShardAssignment& assignment,
                                            Scheme scheme, std::uint64_t seed);

// Order-then-slice: the global ordering is cut into m slices and each slice
// keeps the ordering's relative order.
std::vector<ShardIndex> build_sliced_indexes(const Corpus& corpus, const Ordering& ordering,
                                             std::uint32_t m);

// Per-shard ordering seed used by build_shard_indexes.
std::uint64_t shard_seed(std::uint64_t seed, ShardId shard);

// "term<TAB>docid,docid,..." per list.
void dump_index(std::ostream& out, const Corpus& corpus, const ShardIndex& index);

} // namespace shardlab
