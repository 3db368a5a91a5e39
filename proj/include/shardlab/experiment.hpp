#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shardlab/codecs.hpp"
#include "shardlab/corpus.hpp"
#include "shardlab/ordering.hpp"
#include "shardlab/querysim.hpp"
#include "shardlab/sharding.hpp"

namespace shardlab {

struct ExperimentPlan {
    // Corpus source: the file when set, otherwise the synthetic spec.
    std::optional<std::filesystem::path> corpus_file;
    std::optional<std::filesystem::path> stopwords;
    SyntheticSpec synthetic;

    std::vector<Policy> policies{Policy::random};
    std::vector<Scheme> schemes{Scheme::rnd, Scheme::url};
    std::vector<Codec> codecs{Codec::delta};
    std::vector<std::uint32_t> m_values{1};
    std::vector<std::uint64_t> seeds{1};

    // Surrogate rows are produced when a query file is given or
    // synthetic_queries > 0 (queries drawn from the corpus).
    std::optional<std::filesystem::path> query_file;
    std::size_t synthetic_queries = 0;

    std::filesystem::path output_dir = ".";

    void validate() const;
};

struct SizeRow {
    Policy policy;
    Scheme scheme;
    Codec codec;
    std::uint32_t m;
    std::uint64_t seed;
    std::size_t docs;
    std::uint64_t postings;
    std::uint64_t total_bits;
    double overhead_bits;
    double bpp;
    double bpp_oh;
};

struct SurrogateRow {
    Policy policy;
    std::uint32_t m;
    std::uint64_t seed;
    double avg_td;
    double avg_tc;
    std::size_t queries_evaluated;
};

struct ExperimentResult {
    std::vector<SizeRow> sizes;         // ordered policy, scheme, codec, m, seed
    std::vector<SurrogateRow> surrogates; // ordered policy, m, seed
};

// Builds the shard indexes of one sweep point. For Policy::m_slice the
// scheme orders the whole corpus and the ordering is sliced; otherwise the
// corpus is distributed first and each shard is ordered on its own.
std::vector<ShardIndex> build_partitioned(const Corpus& corpus, Policy policy, Scheme scheme,
                                          std::uint32_t m, std::uint64_t seed);

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentPlan& plan,
                                std::span<const Query> queries = {});

Corpus load_corpus(const ExperimentPlan& plan);
std::vector<Query> load_plan_queries(const ExperimentPlan& plan, const Corpus& corpus);

inline constexpr std::string_view size_csv_header =
    "policy,scheme,codec,m,seed,docs,postings,total_bits,overhead_bits,bpp,bpp_oh";
inline constexpr std::string_view surrogate_csv_header = "policy,m,seed,avg_td,avg_tc,queries_evaluated";

void write_size_csv(std::ostream& out, std::span<const SizeRow> rows);
void write_surrogate_csv(std::ostream& out, std::span<const SurrogateRow> rows);

// Runs the plan and writes sizes.csv (and surrogates.csv when queries are
// configured) into the output directory. Files appear only when complete.
// Returns the written paths.
std::vector<std::filesystem::path> run_experiment_files(const ExperimentPlan& plan);

// Writes through a temporary sibling file renamed into place on success.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

// Flat "key = value" configuration; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config(std::istream& in);
void apply_config(ExperimentPlan& plan, const std::map<std::string, std::string>& config);

// Least-squares slope of log2 y against log2 x.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// Reads two numeric columns from a CSV with a header row, keeping rows whose
// columns match every (name, value) filter.
std::pair<std::vector<double>, std::vector<double>>
read_csv_columns(const std::filesystem::path& path, const std::string& x_col, const std::string& y_col,
                 const std::vector<std::pair<std::string, std::string>>& filters = {});

} // namespace shardlab
