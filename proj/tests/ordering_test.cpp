#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "shardlab/ordering.hpp"
#include "test_support.hpp"

using namespace shardlab;
using shardlab::testing::make_corpus;

namespace {

std::vector<std::string> urls_in_order(const Corpus& corpus, const Ordering& ordering)
{
    std::vector<std::string> urls;
    for (auto key : ordering.sequence())
        urls.push_back(corpus.document(key).url);
    return urls;
}

bool is_permutation_of_all(const Corpus& corpus, const Ordering& ordering)
{
    auto seq = ordering.sequence();
    std::sort(seq.begin(), seq.end());
    return seq == all_documents(corpus);
}

bool hosts_contiguous(const Corpus& corpus, const Ordering& ordering)
{
    std::set<std::string> finished;
    std::string current;
    for (auto key : ordering.sequence()) {
        const auto& host = corpus.document(key).host;
        if (host == current)
            continue;
        if (!finished.insert(host).second)
            return false;
        current = host;
    }
    return true;
}

Corpus multi_host_corpus()
{
    return make_corpus({{"b.gov/2", {"x"}},
                        {"a.gov/1", {"y"}},
                        {"c.gov/1", {"x", "y"}},
                        {"a.gov/0", {"z"}},
                        {"b.gov/1", {"z", "x"}},
                        {"c.gov/0", {"q"}},
                        {"a.gov/2", {"q", "y"}}});
}

} // namespace

TEST(Scheme, NamesRoundTrip)
{
    for (auto s : {Scheme::rnd, Scheme::url, Scheme::ih_url, Scheme::ih_rnd, Scheme::kscn_tsp})
        EXPECT_EQ(parse_scheme(scheme_name(s)), s);
    EXPECT_THROW(parse_scheme("nope"), Error);
}

TEST(UrlSortKey, ReversesHostLabels)
{
    EXPECT_EQ(url_sort_key("www.irs.gov/f/x"), (UrlSortKey{"gov.irs.www", "/f/x"}));
    EXPECT_EQ(url_sort_key("localhost/a"), (UrlSortKey{"localhost", "/a"}));
    EXPECT_EQ(url_sort_key("a.b.c.gov"), (UrlSortKey{"gov.c.b.a", ""}));
}

TEST(OrderRandom, SingleDocumentGetsDocIdOne)
{
    auto corpus = make_corpus({{"a.gov/1", {"x"}}});
    auto ordering = order_random(corpus, all_documents(corpus), 5);
    EXPECT_EQ(ordering.mapping(), (std::vector<std::pair<DocKey, DocId>>{{0, 1}}));
}

TEST(OrderRandom, FixedSeedIsReproducible)
{
    auto corpus = multi_host_corpus();
    auto docs = all_documents(corpus);
    EXPECT_EQ(order_random(corpus, docs, 11), order_random(corpus, docs, 11));
    EXPECT_TRUE(is_permutation_of_all(corpus, order_random(corpus, docs, 11)));
}

TEST(OrderRandom, AllPermutationsEquallyLikely)
{
    auto corpus = make_corpus({{"a.gov/1", {"x"}}, {"a.gov/2", {"x"}}, {"a.gov/3", {"x"}}, {"a.gov/4", {"x"}}});
    auto docs = all_documents(corpus);
    constexpr int trials = 10000;
    std::map<std::vector<DocKey>, int> counts;
    for (int trial = 0; trial < trials; ++trial)
        ++counts[order_random(corpus, docs, static_cast<std::uint64_t>(trial)).sequence()];
    ASSERT_EQ(counts.size(), 24U);
    const double p = 1.0 / 24.0;
    const double mean = trials * p;
    const double sigma = std::sqrt(trials * p * (1 - p));
    for (const auto& [perm, count] : counts)
        EXPECT_NEAR(count, mean, 3 * sigma);
}

TEST(OrderUrl, SortsByReversedHostThenPath)
{
    auto corpus = make_corpus({{"b.gov/2", {"x"}}, {"a.gov/1", {"x"}}, {"a.gov/0", {"x"}}});
    EXPECT_EQ(urls_in_order(corpus, order_url(corpus, all_documents(corpus))),
              (std::vector<std::string>{"a.gov/0", "a.gov/1", "b.gov/2"}));

    auto subdomains = make_corpus({{"www.x.gov/p", {"x"}}, {"mail.x.gov/p", {"x"}}});
    EXPECT_EQ(urls_in_order(subdomains, order_url(subdomains, all_documents(subdomains))),
              (std::vector<std::string>{"mail.x.gov/p", "www.x.gov/p"}));
}

TEST(OrderUrl, RespectsTheGivenSubset)
{
    auto corpus = multi_host_corpus();
    std::vector<DocKey> subset{4, 0, 6};
    auto ordering = order_url(corpus, subset);
    EXPECT_EQ(urls_in_order(corpus, ordering), (std::vector<std::string>{"a.gov/2", "b.gov/1", "b.gov/2"}));
}

TEST(OrderUrl, RejectsEmptyOrDuplicateInput)
{
    auto corpus = multi_host_corpus();
    EXPECT_THROW(order_url(corpus, std::vector<DocKey>{}), Error);
    EXPECT_THROW(order_url(corpus, std::vector<DocKey>{1, 1}), Error);
}

TEST(OrderIhUrl, OneHostMatchesUrlOrder)
{
    auto corpus = make_corpus({{"a.gov/3", {"x"}}, {"a.gov/1", {"y"}}, {"a.gov/2", {"z"}}});
    auto docs = all_documents(corpus);
    EXPECT_EQ(order_ih_url(corpus, docs, 9).sequence(), order_url(corpus, docs).sequence());
}

TEST(OrderIhUrl, HostsContiguousAndUrlSortedWithin)
{
    auto corpus = multi_host_corpus();
    auto docs = all_documents(corpus);
    auto ordering = order_ih_url(corpus, docs, 3);
    EXPECT_EQ(ordering, order_ih_url(corpus, docs, 3));
    EXPECT_TRUE(is_permutation_of_all(corpus, ordering));
    EXPECT_TRUE(hosts_contiguous(corpus, ordering));
    auto urls = urls_in_order(corpus, ordering);
    for (std::size_t i = 1; i < urls.size(); ++i) {
        if (extract_host(urls[i]) == extract_host(urls[i - 1]))
            EXPECT_LT(url_sort_key(urls[i - 1]), url_sort_key(urls[i]));
    }
}

TEST(OrderIhUrl, SeedsChangeHostOrder)
{
    SyntheticSpec spec;
    spec.n_docs = 400;
    spec.n_hosts = 40;
    auto corpus = generate_synthetic(spec);
    auto docs = all_documents(corpus);
    std::set<std::vector<DocKey>> distinct;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        distinct.insert(order_ih_url(corpus, docs, seed).sequence());
    EXPECT_GT(distinct.size(), 1U);
}

TEST(OrderIhRnd, HostsContiguousAndReproducible)
{
    auto single = make_corpus({{"a.gov/1", {"x"}}});
    EXPECT_EQ(order_ih_rnd(single, all_documents(single), 1).sequence(), std::vector<DocKey>{0});

    SyntheticSpec spec;
    spec.n_docs = 600;
    spec.n_hosts = 30;
    auto corpus = generate_synthetic(spec);
    auto docs = all_documents(corpus);
    auto ordering = order_ih_rnd(corpus, docs, 4);
    EXPECT_EQ(ordering, order_ih_rnd(corpus, docs, 4));
    EXPECT_TRUE(is_permutation_of_all(corpus, ordering));
    EXPECT_TRUE(hosts_contiguous(corpus, ordering));
}

TEST(OrderKscnTsp, SingleDocument)
{
    auto corpus = make_corpus({{"a.gov/1", {"x"}}});
    EXPECT_EQ(order_kscn_tsp(corpus, all_documents(corpus), 1).sequence(), std::vector<DocKey>{0});
}

TEST(OrderKscnTsp, IdenticalDocumentsAreAdjacent)
{
    auto corpus = make_corpus({{"a.gov/1", {"a", "b"}}, {"a.gov/2", {"c"}}, {"a.gov/3", {"a", "b"}}});
    auto seq = order_kscn_tsp(corpus, all_documents(corpus), 1).sequence();
    auto p0 = std::find(seq.begin(), seq.end(), 0U) - seq.begin();
    auto p2 = std::find(seq.begin(), seq.end(), 2U) - seq.begin();
    EXPECT_EQ(std::abs(p0 - p2), 1);
}

TEST(OrderKscnTsp, TwoClustersHoldTheIdenticalPairs)
{
    auto corpus = make_corpus(
        {{"a.gov/1", {"a", "b"}}, {"a.gov/2", {"c"}}, {"a.gov/3", {"a", "b"}}, {"a.gov/4", {"c"}}});
    auto seq = order_kscn_tsp(corpus, all_documents(corpus), 1).sequence();
    ASSERT_EQ(seq.size(), 4U);
    // K = 2 clusters of capacity 2 occupy positions {0,1} and {2,3}.
    std::set<DocKey> first{seq[0], seq[1]}, second{seq[2], seq[3]};
    std::set<DocKey> ab{0, 2}, c{1, 3};
    EXPECT_TRUE((first == ab && second == c) || (first == c && second == ab));
}

TEST(OrderKscnTsp, IsABijection)
{
    SyntheticSpec spec;
    spec.n_docs = 300;
    spec.n_hosts = 10;
    auto corpus = generate_synthetic(spec);
    auto ordering = order_kscn_tsp(corpus, all_documents(corpus), 2);
    EXPECT_TRUE(is_permutation_of_all(corpus, ordering));
}

TEST(OrderDocuments, DispatchesEveryScheme)
{
    auto corpus = multi_host_corpus();
    auto docs = all_documents(corpus);
    EXPECT_EQ(order_documents(Scheme::url, corpus, docs, 0), order_url(corpus, docs));
    EXPECT_EQ(order_documents(Scheme::rnd, corpus, docs, 6), order_random(corpus, docs, 6));
    EXPECT_EQ(order_documents(Scheme::ih_rnd, corpus, docs, 6), order_ih_rnd(corpus, docs, 6));
    EXPECT_EQ(order_documents(Scheme::ih_url, corpus, docs, 6), order_ih_url(corpus, docs, 6));
    EXPECT_EQ(order_documents(Scheme::kscn_tsp, corpus, docs, 6), order_kscn_tsp(corpus, docs, 6));
}

TEST(WriteOrderingCsv, ListsDocKeyAndDocId)
{
    auto corpus = make_corpus({{"b.gov/1", {"x"}}, {"a.gov/1", {"x"}}});
    std::ostringstream out;
    write_ordering_csv(out, order_url(corpus, all_documents(corpus)));
    EXPECT_EQ(out.str(), "doc_key,docid\n0,2\n1,1\n");
}
