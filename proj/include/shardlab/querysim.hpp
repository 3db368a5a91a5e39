#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shardlab/corpus.hpp"
#include "shardlab/indexcore.hpp"

namespace shardlab {

struct Query {
    std::string raw;
    std::vector<TermId> terms; // sorted, deduplicated, in-vocabulary only

    bool evaluable() const { return !terms.empty(); }
};

Query parse_query(std::string_view line, const Vocabulary& vocab);

// One query per line. Queries with no in-vocabulary term are kept but not
// evaluable; a warning is printed for each.
std::vector<Query> load_queries(std::istream& in, const Vocabulary& vocab);
std::vector<Query> load_queries(const std::filesystem::path& path, const Vocabulary& vocab);

// Query workload drawn from the corpus itself: each query takes 2 to 4
// distinct terms of a uniformly chosen document.
std::vector<Query> generate_queries(const Corpus& corpus, std::size_t count, std::uint64_t seed);
void write_queries(std::ostream& out, std::span<const Query> queries);

// T_d(q) = max_j sum_{t in q} l_j(t)
std::uint64_t t_disjunctive(const Query& query, std::span<const ShardIndex> indexes);
// T_c(q) = max_j min_{t in q} l_j(t); a term missing from shard j makes its minimum 0.
std::uint64_t t_conjunctive(const Query& query, std::span<const ShardIndex> indexes);

struct SurrogateReport {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_query; // (T_d, T_c), evaluable only
    double avg_td = 0.0;
    double avg_tc = 0.0;
    std::size_t evaluated = 0;
    std::size_t excluded = 0;
};

SurrogateReport average_surrogates(std::span<const Query> queries, std::span<const ShardIndex> indexes);

} // namespace shardlab
