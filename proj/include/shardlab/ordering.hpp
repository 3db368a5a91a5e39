#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shardlab/common.hpp"
#include "shardlab/corpus.hpp"

namespace shardlab {

enum class Scheme { rnd, url, ih_url, ih_rnd, kscn_tsp };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);

// A docId assignment over a subset of a corpus: sequence()[i] holds the
// document that receives local docId i + 1.
class Ordering {
public:
    Ordering(Scheme scheme, std::uint64_t seed, std::vector<DocKey> sequence)
        : scheme_(scheme), seed_(seed), sequence_(std::move(sequence))
    {
    }

    Scheme scheme() const { return scheme_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<DocKey>& sequence() const { return sequence_; }
    std::size_t size() const { return sequence_.size(); }

    // (doc_key, docid) pairs sorted by doc_key.
    std::vector<std::pair<DocKey, DocId>> mapping() const;

    bool operator==(const Ordering&) const = default;

private:
    Scheme scheme_;
    std::uint64_t seed_;
    std::vector<DocKey> sequence_;
};

struct UrlSortKey {
    std::string reversed_host;
    std::string remainder;

    auto operator<=>(const UrlSortKey&) const = default;
};

UrlSortKey url_sort_key(std::string_view url);

Ordering order_random(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed);
Ordering order_url(const Corpus& corpus, std::span<const DocKey> docs);
Ordering order_ih_url(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed);
Ordering order_ih_rnd(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed);

// k-scan clustering into round(sqrt(n)) clusters followed by a greedy
// nearest-neighbour path inside each cluster. Similarity is the size of the
// term-set intersection.
Ordering order_kscn_tsp(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed);

Ordering order_documents(Scheme scheme, const Corpus& corpus, std::span<const DocKey> docs,
                         std::uint64_t seed);

// Every document of the corpus, in doc_key order.
std::vector<DocKey> all_documents(const Corpus& corpus);

void write_ordering_csv(std::ostream& out, const Ordering& ordering);

} // namespace shardlab
