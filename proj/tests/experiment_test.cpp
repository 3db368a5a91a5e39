#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "shardlab/experiment.hpp"
#include "shardlab/metrics.hpp"
#include "test_support.hpp"

using namespace shardlab;
using shardlab::testing::four_doc_corpus;

namespace {

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("shardlab_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentPlan small_synthetic_plan(const std::filesystem::path& out)
{
    ExperimentPlan plan;
    plan.synthetic.n_docs = 600;
    plan.synthetic.n_hosts = 12;
    plan.policies = {Policy::random, Policy::url_slice};
    plan.schemes = {Scheme::rnd, Scheme::url};
    plan.codecs = {Codec::delta, Codec::pfordelta};
    plan.m_values = {1, 2, 4};
    plan.seeds = {1, 2};
    plan.synthetic_queries = 20;
    plan.output_dir = out;
    return plan;
}

} // namespace

TEST(RunExperiment, FourDocumentInstanceSingleRow)
{
    auto corpus = four_doc_corpus();
    ExperimentPlan plan;
    plan.schemes = {Scheme::rnd};
    auto result = run_experiment(corpus, plan);
    ASSERT_EQ(result.sizes.size(), 1U);
    const auto& row = result.sizes[0];
    EXPECT_EQ(row.postings, 8U);
    EXPECT_EQ(row.docs, 4U);
    auto indexes = build_partitioned(corpus, Policy::random, Scheme::rnd, 1, 1);
    EXPECT_EQ(row.total_bits, bits_per_posting(indexes, Codec::delta).total_bits);
    EXPECT_DOUBLE_EQ(row.bpp, static_cast<double>(row.total_bits) / 8.0);
    EXPECT_TRUE(result.surrogates.empty());
}

TEST(RunExperiment, SweepIsACartesianProductInSortedOrder)
{
    auto plan = small_synthetic_plan(".");
    auto corpus = load_corpus(plan);
    auto queries = load_plan_queries(plan, corpus);
    auto result = run_experiment(corpus, plan, queries);
    // 2 policies x 2 schemes x 2 codecs x 3 m x 2 seeds.
    ASSERT_EQ(result.sizes.size(), 48U);
    EXPECT_EQ(result.surrogates.size(), 12U);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(result.sizes[i].policy, Policy::random);
        EXPECT_EQ(result.sizes[i].scheme, Scheme::rnd);
        EXPECT_EQ(result.sizes[i].codec, Codec::delta);
    }
    EXPECT_EQ(result.sizes[0].m, 1U);
    EXPECT_EQ(result.sizes[1].m, 1U);
    EXPECT_EQ(result.sizes[2].m, 2U);
    EXPECT_EQ(result.sizes[4].m, 4U);
    EXPECT_EQ(result.sizes[1].seed, 2U);
    for (const auto& row : result.sizes)
        EXPECT_EQ(row.postings, corpus.total_postings());
}

TEST(RunExperiment, SingleShardIsPolicyIndependent)
{
    auto plan = small_synthetic_plan(".");
    plan.seeds = {1};
    auto corpus = load_corpus(plan);
    auto queries = load_plan_queries(plan, corpus);
    auto result = run_experiment(corpus, plan, queries);
    ASSERT_EQ(result.surrogates.size(), 6U);
    EXPECT_DOUBLE_EQ(result.surrogates[0].avg_td, result.surrogates[3].avg_td);
    EXPECT_DOUBLE_EQ(result.surrogates[0].avg_tc, result.surrogates[3].avg_tc);
}

TEST(RunExperimentFiles, ByteIdenticalAcrossRuns)
{
    auto a = scratch_dir("determinism_a");
    auto b = scratch_dir("determinism_b");
    auto written_a = run_experiment_files(small_synthetic_plan(a));
    auto written_b = run_experiment_files(small_synthetic_plan(b));
    ASSERT_EQ(written_a.size(), 2U);
    ASSERT_EQ(written_b.size(), 2U);
    for (std::size_t i = 0; i < written_a.size(); ++i)
        EXPECT_EQ(slurp(written_a[i]), slurp(written_b[i]));
    EXPECT_FALSE(std::filesystem::exists(a / "sizes.csv.tmp"));
    auto sizes = slurp(a / "sizes.csv");
    EXPECT_EQ(sizes.substr(0, sizes.find('\n')), size_csv_header);
}

TEST(RunExperimentFiles, ReadsCorpusAndQueryFiles)
{
    auto dir = scratch_dir("files");
    {
        std::ofstream corpus(dir / "corpus.tsv");
        corpus << "a.gov/1\tt1 t3\na.gov/2\tt2 t3\na.gov/3\tt1 t3\na.gov/4\tt2 t3\n";
        std::ofstream queries(dir / "queries.txt");
        queries << "t1 t3\nzzzz\n";
    }
    ExperimentPlan plan;
    plan.corpus_file = dir / "corpus.tsv";
    plan.query_file = dir / "queries.txt";
    plan.m_values = {1, 2, 4};
    plan.policies = {Policy::round_robin};
    plan.output_dir = dir / "out";
    auto written = run_experiment_files(plan);
    ASSERT_EQ(written.size(), 2U);
    auto surrogates = slurp(dir / "out" / "surrogates.csv");
    EXPECT_NE(surrogates.find("round-robin,1,1,6.000,2.000,1\n"), std::string::npos) << surrogates;
    EXPECT_NE(surrogates.find("round-robin,4,1,2.000,1.000,1\n"), std::string::npos) << surrogates;
}

TEST(WriteCsv, FormatsRows)
{
    std::vector<SizeRow> sizes{{Policy::url_slice, Scheme::ih_rnd, Codec::pfordelta, 4, 7, 10, 20, 45, 3.5, 2.25, 2.425}};
    std::ostringstream out;
    write_size_csv(out, sizes);
    EXPECT_EQ(out.str(), std::string(size_csv_header) + "\nurl-slice,ih-rnd,pfd,4,7,10,20,45,3.500,2.250,2.425\n");

    std::vector<SurrogateRow> surrogates{{Policy::random, 2, 1, 10.0, 2.5, 3}};
    std::ostringstream out2;
    write_surrogate_csv(out2, surrogates);
    EXPECT_EQ(out2.str(), std::string(surrogate_csv_header) + "\nrandom,2,1,10.000,2.500,3\n");
}

TEST(Config, ParsesKeysListsAndComments)
{
    std::istringstream in("# sweep\npolicies = random, url-slice\nschemes=url\nm = 1,2,4 # shard counts\n"
                          "codecs = delta,pfd\nseeds=3\nsynth.n_docs = 123\nsynth.host_locality=0.25\n"
                          "synthetic_queries = 9\nout = results\n");
    ExperimentPlan plan;
    apply_config(plan, parse_config(in));
    EXPECT_EQ(plan.policies, (std::vector<Policy>{Policy::random, Policy::url_slice}));
    EXPECT_EQ(plan.schemes, std::vector<Scheme>{Scheme::url});
    EXPECT_EQ(plan.m_values, (std::vector<std::uint32_t>{1, 2, 4}));
    EXPECT_EQ(plan.codecs, (std::vector<Codec>{Codec::delta, Codec::pfordelta}));
    EXPECT_EQ(plan.seeds, std::vector<std::uint64_t>{3});
    EXPECT_EQ(plan.synthetic.n_docs, 123U);
    EXPECT_DOUBLE_EQ(plan.synthetic.host_locality, 0.25);
    EXPECT_EQ(plan.synthetic_queries, 9U);
    EXPECT_EQ(plan.output_dir, "results");
}

TEST(Config, RejectsBadInput)
{
    ExperimentPlan plan;
    std::istringstream no_eq("policies random\n");
    EXPECT_THROW(parse_config(no_eq), Error);
    EXPECT_THROW(apply_config(plan, {{"colour", "blue"}}), Error);
    EXPECT_THROW(apply_config(plan, {{"m", "1,x"}}), Error);
    EXPECT_THROW(apply_config(plan, {{"schemes", "alphabetical"}}), Error);
    plan.m_values = {0};
    EXPECT_THROW(plan.validate(), Error);
}

TEST(Slope, ExactPowerLaws)
{
    EXPECT_NEAR(fit_loglog_slope(std::vector<double>{1, 2, 4}, std::vector<double>{100, 50, 25}), -1.0, 1e-12);
    EXPECT_NEAR(fit_loglog_slope(std::vector<double>{1, 2, 4}, std::vector<double>{7, 7, 7}), 0.0, 1e-12);
    EXPECT_NEAR(fit_loglog_slope(std::vector<double>{1, 10, 100}, std::vector<double>{1, 100, 10000}), 2.0, 1e-12);
}

TEST(Slope, DegenerateFitsAreErrors)
{
    EXPECT_THROW(fit_loglog_slope(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), Error);
    EXPECT_THROW(fit_loglog_slope(std::vector<double>{2}, std::vector<double>{1}), Error);
    EXPECT_THROW(fit_loglog_slope(std::vector<double>{1, 2}, std::vector<double>{0, 1}), Error);
}

TEST(ReadCsvColumns, FiltersRowsAndNamesMissingColumns)
{
    auto dir = scratch_dir("csv");
    {
        std::ofstream csv(dir / "s.csv");
        csv << "policy,m,avg_td\nrandom,1,100\nrandom,2,50\nurl-slice,1,90\nrandom,4,25\n";
    }
    auto [x, y] = read_csv_columns(dir / "s.csv", "m", "avg_td", {{"policy", "random"}});
    EXPECT_EQ(x, (std::vector<double>{1, 2, 4}));
    EXPECT_NEAR(fit_loglog_slope(x, y), -1.0, 1e-12);
    try {
        read_csv_columns(dir / "s.csv", "m", "avg_tq");
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("avg_tq"), std::string::npos);
    }
}
