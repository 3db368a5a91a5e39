#include "shardlab/indexcore.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include <fmt/core.h>

#include "shardlab/random.hpp"

namespace shardlab {

ShardIndex::ShardIndex(ShardId shard, std::uint32_t n_docs, std::vector<PostingsList> lists)
    : shard_(shard), n_docs_(n_docs), lists_(std::move(lists))
{
    std::sort(lists_.begin(), lists_.end(),
              [](const PostingsList& a, const PostingsList& b) { return a.term < b.term; });
    for (std::size_t i = 0; i < lists_.size(); ++i) {
        const auto& list = lists_[i];
        if (i > 0 && lists_[i - 1].term == list.term)
            throw Error(fmt::format("duplicate postings list for term {}", list.term));
        if (list.docids.empty())
            throw Error(fmt::format("empty postings list for term {}", list.term));
        if (list.docids.front() < 1 || list.docids.back() > n_docs)
            throw Error(fmt::format("docid out of range in list of term {}", list.term));
        if (std::adjacent_find(list.docids.begin(), list.docids.end(), std::greater_equal<>()) !=
            list.docids.end())
            throw Error(fmt::format("postings list of term {} is not strictly ascending", list.term));
        postings_ += list.docids.size();
    }
}

const PostingsList* ShardIndex::find(TermId term) const
{
    auto it = std::lower_bound(lists_.begin(), lists_.end(), term,
                               [](const PostingsList& list, TermId t) { return list.term < t; });
    if (it == lists_.end() || it->term != term)
        return nullptr;
    return &*it;
}

std::uint64_t ShardIndex::length(TermId term) const
{
    const auto* list = find(term);
    return list == nullptr ? 0 : list->docids.size();
}

ShardIndex build_index(const Corpus& corpus, std::span<const DocKey> sequence, ShardId shard)
{
    std::unordered_map<TermId, std::vector<DocId>> accumulated;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        auto docid = static_cast<DocId>(i + 1);
        for (TermId t : corpus.document(sequence[i]).terms)
            accumulated[t].push_back(docid);
    }
    std::vector<PostingsList> lists;
    lists.reserve(accumulated.size());
    for (auto& [term, docids] : accumulated)
        lists.push_back({term, std::move(docids)});
    return {shard, static_cast<std::uint32_t>(sequence.size()), std::move(lists)};
}

std::uint64_t shard_seed(std::uint64_t seed, ShardId shard)
{
    return derive_seed(seed, shard);
}

std::vector<ShardIndex> build_shard_indexes(const Corpus& corpus, const ShardAssignment& assignment,
                                            Scheme scheme, std::uint64_t seed)
{
    if (assignment.assignments().size() != corpus.size())
        throw Error("shard assignment does not cover the corpus");
    auto members = assignment.members();
    std::vector<ShardIndex> indexes;
    indexes.reserve(members.size());
    for (ShardId shard = 0; shard < members.size(); ++shard) {
        if (members[shard].empty()) {
            indexes.emplace_back(shard, 0, std::vector<PostingsList>{});
            continue;
        }
        auto ordering = order_documents(scheme, corpus, members[shard], shard_seed(seed, shard));
        indexes.push_back(build_index(corpus, ordering.sequence(), shard));
    }
    return indexes;
}

std::vector<ShardIndex> build_sliced_indexes(const Corpus& corpus, const Ordering& ordering,
                                             std::uint32_t m)
{
    if (ordering.size() != corpus.size())
        throw Error("slicing needs an ordering over the whole corpus");
    if (m < 1)
        throw Error("shard count must be at least 1");
    const auto& sequence = ordering.sequence();
    std::vector<ShardIndex> indexes;
    indexes.reserve(m);
    std::size_t begin = 0;
    for (ShardId shard = 0; shard < m; ++shard) {
        std::size_t end = begin;
        while (end < sequence.size() && slice_of(end, sequence.size(), m) == shard)
            ++end;
        indexes.push_back(build_index(corpus, std::span(sequence).subspan(begin, end - begin), shard));
        begin = end;
    }
    return indexes;
}

void dump_index(std::ostream& out, const Corpus& corpus, const ShardIndex& index)
{
    for (const auto& list : index.lists()) {
        out << corpus.vocab().token(list.term) << '\t';
        for (std::size_t i = 0; i < list.docids.size(); ++i) {
            if (i > 0)
                out << ',';
            out << list.docids[i];
        }
        out << '\n';
    }
}

} // namespace shardlab
