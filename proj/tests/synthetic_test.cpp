#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "shardlab/corpus.hpp"

using namespace shardlab;

namespace {

std::string serialize(const Corpus& corpus)
{
    std::ostringstream out;
    write_corpus(out, corpus);
    return out.str();
}

} // namespace

TEST(Synthetic, SameSeedGivesIdenticalCorpus)
{
    SyntheticSpec spec;
    spec.n_docs = 2000;
    spec.n_hosts = 50;
    spec.seed = 7;
    auto a = generate_synthetic(spec);
    auto b = generate_synthetic(spec);
    EXPECT_TRUE(a == b);
    EXPECT_EQ(serialize(a), serialize(b));
    spec.seed = 8;
    EXPECT_NE(serialize(generate_synthetic(spec)), serialize(a));
}

TEST(Synthetic, HostsPartitionDocumentsAndUrlsAreUnique)
{
    SyntheticSpec spec;
    spec.n_docs = 100;
    spec.n_hosts = 10;
    auto corpus = generate_synthetic(spec);
    ASSERT_EQ(corpus.size(), 100U);
    std::set<std::string> urls, hosts;
    for (const auto& d : corpus.documents()) {
        urls.insert(d.url);
        hosts.insert(d.host);
        EXPECT_FALSE(d.terms.empty());
    }
    EXPECT_EQ(urls.size(), 100U);
    EXPECT_EQ(hosts.size(), 10U);
}

TEST(Synthetic, RejectsInvalidSpecs)
{
    SyntheticSpec spec;
    spec.n_docs = 5;
    spec.n_hosts = 10;
    EXPECT_THROW(generate_synthetic(spec), Error);
    spec = {};
    spec.host_locality = 1.5;
    EXPECT_THROW(generate_synthetic(spec), Error);
    spec = {};
    spec.zipf_exponent = 0.0;
    EXPECT_THROW(generate_synthetic(spec), Error);
    spec = {};
    spec.host_size_skew = -1.0;
    EXPECT_THROW(generate_synthetic(spec), Error);
}

// Chi-squared homogeneity test of host x term-frequency-bucket counts. Without
// host locality every host draws from the same distribution, so the test must
// not reject at the 1% level; with full locality it must.
namespace {

double homogeneity_statistic(const Corpus& corpus, std::size_t hosts_used, std::size_t buckets)
{
    // Buckets: the (buckets - 1) most frequent global terms, then "other".
    std::vector<std::pair<std::uint64_t, TermId>> by_df;
    for (TermId t = 0; t < corpus.vocab().size(); ++t)
        by_df.emplace_back(corpus.df(t), t);
    std::sort(by_df.rbegin(), by_df.rend());
    std::map<TermId, std::size_t> bucket_of;
    for (std::size_t i = 0; i + 1 < buckets && i < by_df.size(); ++i)
        bucket_of[by_df[i].second] = i;

    std::map<std::string, std::size_t> host_row;
    std::vector<std::vector<double>> counts;
    for (const auto& d : corpus.documents()) {
        auto [it, inserted] = host_row.try_emplace(d.host, host_row.size());
        if (inserted)
            counts.emplace_back(buckets, 0.0);
        for (auto t : d.terms) {
            auto b = bucket_of.find(t);
            counts[it->second][b == bucket_of.end() ? buckets - 1 : b->second] += 1.0;
        }
    }
    counts.resize(std::min(hosts_used, counts.size()));

    std::vector<double> col(buckets, 0.0);
    std::vector<double> row(counts.size(), 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        for (std::size_t c = 0; c < buckets; ++c) {
            row[r] += counts[r][c];
            col[c] += counts[r][c];
            total += counts[r][c];
        }
    }
    double chi2 = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        for (std::size_t c = 0; c < buckets; ++c) {
            double expected = row[r] * col[c] / total;
            chi2 += (counts[r][c] - expected) * (counts[r][c] - expected) / expected;
        }
    }
    return chi2;
}

} // namespace

TEST(Synthetic, NoLocalityMakesHostsIndistinguishable)
{
    SyntheticSpec spec;
    spec.n_docs = 10000;
    spec.n_hosts = 2;
    spec.host_locality = 0.0;
    spec.drift = 0.0;
    spec.host_size_skew = 0.0;
    spec.seed = 3;
    // 2 hosts x 10 buckets: 9 degrees of freedom; the 1% critical value is 21.666.
    double chi2 = homogeneity_statistic(generate_synthetic(spec), 2, 10);
    EXPECT_LT(chi2, 21.666);

    spec.host_locality = 1.0;
    EXPECT_GT(homogeneity_statistic(generate_synthetic(spec), 2, 10), 21.666);
}
