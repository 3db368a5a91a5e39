#include "shardlab/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <fmt/core.h>

#include "shardlab/random.hpp"

namespace shardlab {

namespace {

std::vector<DocKey> sorted_unique(const Corpus& corpus, std::span<const DocKey> docs)
{
    if (docs.empty())
        throw Error("cannot order an empty document set");
    std::vector<DocKey> keys(docs.begin(), docs.end());
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw Error("document set contains duplicates");
    if (keys.back() >= corpus.size())
        throw Error(fmt::format("doc_key {} is outside the corpus", keys.back()));
    return keys;
}

void sort_by_url(const Corpus& corpus, std::vector<DocKey>& keys)
{
    std::vector<std::pair<UrlSortKey, DocKey>> decorated;
    decorated.reserve(keys.size());
    for (DocKey key : keys)
        decorated.emplace_back(url_sort_key(corpus.document(key).url), key);
    std::sort(decorated.begin(), decorated.end());
    for (std::size_t i = 0; i < keys.size(); ++i)
        keys[i] = decorated[i].second;
}

// Hosts in seeded random order, each with its documents in doc_key order.
std::vector<std::vector<DocKey>> shuffled_hosts(const Corpus& corpus, const std::vector<DocKey>& keys,
                                                Rng& rng)
{
    std::map<std::string_view, std::vector<DocKey>> by_host;
    for (DocKey key : keys)
        by_host[corpus.document(key).host].push_back(key);
    std::vector<std::vector<DocKey>> hosts;
    hosts.reserve(by_host.size());
    for (auto& [host, members] : by_host)
        hosts.push_back(std::move(members));
    shuffle(std::span(hosts), rng);
    return hosts;
}

std::uint32_t intersection_size(const std::vector<TermId>& a, const std::vector<TermId>& b)
{
    std::uint32_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace

Scheme parse_scheme(std::string_view name)
{
    if (name == "rnd")
        return Scheme::rnd;
    if (name == "url")
        return Scheme::url;
    if (name == "ih-url")
        return Scheme::ih_url;
    if (name == "ih-rnd")
        return Scheme::ih_rnd;
    if (name == "kscn-tsp")
        return Scheme::kscn_tsp;
    throw Error(fmt::format("unknown docId assignment scheme '{}'", name));
}

std::string_view scheme_name(Scheme scheme)
{
    switch (scheme) {
    case Scheme::rnd:
        return "rnd";
    case Scheme::url:
        return "url";
    case Scheme::ih_url:
        return "ih-url";
    case Scheme::ih_rnd:
        return "ih-rnd";
    case Scheme::kscn_tsp:
        return "kscn-tsp";
    }
    return "?";
}

std::vector<std::pair<DocKey, DocId>> Ordering::mapping() const
{
    std::vector<std::pair<DocKey, DocId>> pairs;
    pairs.reserve(sequence_.size());
    for (std::size_t i = 0; i < sequence_.size(); ++i)
        pairs.emplace_back(sequence_[i], static_cast<DocId>(i + 1));
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

UrlSortKey url_sort_key(std::string_view url)
{
    std::string host = extract_host(url);
    if (host.empty())
        throw Error(fmt::format("URL '{}' has no host", url));
    auto scheme = url.find("://");
    std::string_view rest = scheme == std::string_view::npos ? url : url.substr(scheme + 3);
    UrlSortKey key;
    key.remainder = std::string(rest.substr(host.size()));

    std::string_view labels = host;
    while (true) {
        auto dot = labels.rfind('.');
        if (!key.reversed_host.empty())
            key.reversed_host += '.';
        if (dot == std::string_view::npos) {
            key.reversed_host += labels;
            break;
        }
        key.reversed_host += labels.substr(dot + 1);
        labels = labels.substr(0, dot);
    }
    return key;
}

Ordering order_random(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed)
{
    auto keys = sorted_unique(corpus, docs);
    Rng rng(seed);
    shuffle(std::span(keys), rng);
    return {Scheme::rnd, seed, std::move(keys)};
}

Ordering order_url(const Corpus& corpus, std::span<const DocKey> docs)
{
    auto keys = sorted_unique(corpus, docs);
    sort_by_url(corpus, keys);
    return {Scheme::url, 0, std::move(keys)};
}

Ordering order_ih_url(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed)
{
    auto keys = sorted_unique(corpus, docs);
    Rng rng(seed);
    std::vector<DocKey> sequence;
    sequence.reserve(keys.size());
    for (auto& members : shuffled_hosts(corpus, keys, rng)) {
        sort_by_url(corpus, members);
        sequence.insert(sequence.end(), members.begin(), members.end());
    }
    return {Scheme::ih_url, seed, std::move(sequence)};
}

Ordering order_ih_rnd(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed)
{
    auto keys = sorted_unique(corpus, docs);
    Rng rng(seed);
    std::vector<DocKey> sequence;
    sequence.reserve(keys.size());
    for (auto& members : shuffled_hosts(corpus, keys, rng)) {
        shuffle(std::span(members), rng);
        sequence.insert(sequence.end(), members.begin(), members.end());
    }
    return {Scheme::ih_rnd, seed, std::move(sequence)};
}

Ordering order_kscn_tsp(const Corpus& corpus, std::span<const DocKey> docs, std::uint64_t seed)
{
    auto keys = sorted_unique(corpus, docs);
    const std::size_t n = keys.size();
    const std::size_t clusters = std::max<std::size_t>(1, std::lround(std::sqrt(static_cast<double>(n))));
    const std::size_t capacity = (n + clusters - 1) / clusters;

    auto terms_of = [&](std::uint32_t local) -> const std::vector<TermId>& {
        return corpus.document(keys[local]).terms;
    };

    // Local positions follow doc_key order, so comparing positions breaks ties
    // by smaller doc_key.
    std::unordered_map<TermId, std::vector<std::uint32_t>> postings;
    for (std::uint32_t local = 0; local < n; ++local) {
        for (TermId t : terms_of(local))
            postings[t].push_back(local);
    }

    std::vector<std::uint32_t> unassigned(n);
    std::iota(unassigned.begin(), unassigned.end(), 0);
    std::vector<char> assigned(n, 0);
    std::vector<std::uint32_t> similarity(n, 0);
    std::vector<DocKey> sequence;
    sequence.reserve(n);

    for (std::size_t c = 0; c < clusters && !unassigned.empty(); ++c) {
        auto centroid = *std::min_element(unassigned.begin(), unassigned.end(),
                                          [&](std::uint32_t a, std::uint32_t b) {
                                              auto sa = terms_of(a).size();
                                              auto sb = terms_of(b).size();
                                              return sa != sb ? sa > sb : a < b;
                                          });
        std::erase(unassigned, centroid);
        assigned[centroid] = 1;

        std::vector<std::uint32_t> members{centroid};
        if (c + 1 == clusters || unassigned.size() <= capacity - 1) {
            members.insert(members.end(), unassigned.begin(), unassigned.end());
            unassigned.clear();
        } else {
            for (TermId t : terms_of(centroid)) {
                for (auto other : postings[t]) {
                    if (!assigned[other])
                        ++similarity[other];
                }
            }
            auto more_similar = [&](std::uint32_t a, std::uint32_t b) {
                return similarity[a] != similarity[b] ? similarity[a] > similarity[b] : a < b;
            };
            auto cut = unassigned.begin() + static_cast<std::ptrdiff_t>(capacity - 1);
            std::nth_element(unassigned.begin(), cut, unassigned.end(), more_similar);
            members.insert(members.end(), unassigned.begin(), cut);
            for (auto other : unassigned)
                similarity[other] = 0;
            unassigned.erase(unassigned.begin(), cut);
            std::sort(unassigned.begin(), unassigned.end());
        }
        for (auto member : members)
            assigned[member] = 1;

        // Greedy nearest-neighbour path from the centroid.
        std::vector<std::uint32_t> pending(members.begin() + 1, members.end());
        std::sort(pending.begin(), pending.end());
        std::uint32_t current = centroid;
        sequence.push_back(keys[current]);
        while (!pending.empty()) {
            std::size_t best = 0;
            std::uint32_t best_sim = 0;
            for (std::size_t i = 0; i < pending.size(); ++i) {
                auto sim = intersection_size(terms_of(current), terms_of(pending[i]));
                if (sim > best_sim || (sim == best_sim && pending[i] < pending[best])) {
                    best = i;
                    best_sim = sim;
                }
            }
            current = pending[best];
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
            sequence.push_back(keys[current]);
        }
    }
    return {Scheme::kscn_tsp, seed, std::move(sequence)};
}

Ordering order_documents(Scheme scheme, const Corpus& corpus, std::span<const DocKey> docs,
                         std::uint64_t seed)
{
    switch (scheme) {
    case Scheme::rnd:
        return order_random(corpus, docs, seed);
    case Scheme::url:
        return order_url(corpus, docs);
    case Scheme::ih_url:
        return order_ih_url(corpus, docs, seed);
    case Scheme::ih_rnd:
        return order_ih_rnd(corpus, docs, seed);
    case Scheme::kscn_tsp:
        return order_kscn_tsp(corpus, docs, seed);
    }
    throw Error("unknown scheme");
}

std::vector<DocKey> all_documents(const Corpus& corpus)
{
    std::vector<DocKey> keys(corpus.size());
    std::iota(keys.begin(), keys.end(), 0);
    return keys;
}

void write_ordering_csv(std::ostream& out, const Ordering& ordering)
{
    out << "doc_key,docid\n";
    for (auto [key, docid] : ordering.mapping())
        out << key << ',' << docid << '\n';
}

} // namespace shardlab
