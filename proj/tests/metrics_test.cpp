#include <cmath>

#include <gtest/gtest.h>

#include "shardlab/experiment.hpp"
#include "shardlab/metrics.hpp"
#include "test_support.hpp"

using namespace shardlab;
using shardlab::testing::four_doc_corpus;

namespace {

ShardIndex list_index(std::uint32_t n_docs, std::vector<PostingsList> lists)
{
    return ShardIndex(0, n_docs, std::move(lists));
}

} // namespace

TEST(ShardPostingsBits, FourDocumentInstance)
{
    auto corpus = four_doc_corpus();
    auto index = build_index(corpus, order_url(corpus, all_documents(corpus)).sequence());
    EXPECT_EQ(shard_postings_bits(index, Codec::delta), 17U);
    EXPECT_EQ(shard_postings_bits(ShardIndex{}, Codec::delta), 0U);
    EXPECT_EQ(shard_postings_bits(list_index(20, {{0, {3, 7, 8, 20}}}), Codec::delta), 18U);
}

TEST(OverheadBits, DictionaryTimesPointerWidth)
{
    std::vector<ShardIndex> one{list_index(4, {{0, {1}}, {1, {2}}, {2, {3}}})};
    EXPECT_NEAR(overhead_bits(one, std::vector<std::uint64_t>{18}), 3 * std::log2(18.0), 1e-12);
    EXPECT_NEAR(overhead_bits(one, std::vector<std::uint64_t>{18}), 12.510, 5e-4);

    std::vector<ShardIndex> two{list_index(2, {{0, {1}}, {1, {2}}}), list_index(2, {{0, {1}}})};
    EXPECT_DOUBLE_EQ(overhead_bits(two, std::vector<std::uint64_t>{4, 8}), 7.0);

    std::vector<ShardIndex> empty{ShardIndex{}};
    EXPECT_DOUBLE_EQ(overhead_bits(empty, std::vector<std::uint64_t>{0}), 0.0);
}

TEST(BitsPerPosting, RatiosOfTotals)
{
    std::vector<ShardIndex> single{list_index(20, {{0, {3, 7, 8, 20}}})};
    auto report = bits_per_posting(single, Codec::delta);
    EXPECT_EQ(report.total_bits, 18U);
    EXPECT_EQ(report.postings, 4U);
    EXPECT_DOUBLE_EQ(report.bpp, 4.5);
    EXPECT_NEAR(report.bpp_oh, (18 + std::log2(18.0)) / 4, 1e-12);

    std::vector<ShardIndex> lone{list_index(1, {{0, {1}}})};
    EXPECT_DOUBLE_EQ(bits_per_posting(lone, Codec::delta).bpp, 1.0);
    EXPECT_THROW(bits_per_posting(std::vector<ShardIndex>{ShardIndex{}}, Codec::delta), Error);
}

TEST(BitsPerPosting, OneDocumentPerShardGoesToOne)
{
    SyntheticSpec spec;
    spec.n_docs = 200;
    spec.n_hosts = 10;
    auto corpus = generate_synthetic(spec);
    for (auto scheme : {Scheme::rnd, Scheme::url, Scheme::ih_url, Scheme::ih_rnd, Scheme::kscn_tsp}) {
        for (auto policy : {Policy::round_robin, Policy::url_slice, Policy::m_slice}) {
            auto indexes = build_partitioned(corpus, policy, scheme, 200, 1);
            auto report = bits_per_posting(indexes, Codec::delta);
            EXPECT_DOUBLE_EQ(report.bpp, 1.0);
            EXPECT_EQ(report.total_bits, corpus.total_postings());
        }
    }
}

TEST(BitsPerPosting, PForDeltaIsCountedPerList)
{
    std::vector<std::uint32_t> docids(128);
    for (std::uint32_t i = 0; i < docids.size(); ++i)
        docids[i] = i + 1;
    std::vector<ShardIndex> indexes{list_index(128, {{0, docids}})};
    auto report = bits_per_posting(indexes, Codec::pfordelta);
    EXPECT_EQ(report.total_bits, 16U);
}
