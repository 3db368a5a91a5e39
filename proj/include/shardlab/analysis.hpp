#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shardlab/common.hpp"

namespace shardlab {

// Exact rational in lowest terms, denominator > 0.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Fraction of(std::int64_t num, std::int64_t den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    bool operator==(const Fraction&) const = default;
    bool operator<(const Fraction& other) const;
    bool operator<=(const Fraction& other) const { return !(other < *this); }
};

// Term-document incidence of a collection small enough to enumerate.
// Documents are 0..n_docs-1; term_docs[t] lists the documents containing t.
struct TinyTermDoc {
    std::uint32_t n_docs = 0;
    std::vector<std::vector<std::uint32_t>> term_docs;

    void validate() const;
};

// Three terms over four documents: {d1,d3}, {d2,d4}, {d1,d2,d3,d4}.
TinyTermDoc four_doc_instance();

// All sizes below use Delta coding. `order[p]` is the document at position p.
std::uint64_t single_node_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order);

// Documents split by shard_of (values 0..m-1), each shard keeping the
// relative order of `order`.
std::uint64_t partitioned_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order,
                               std::span<const std::uint32_t> shard_of, std::uint32_t m);

// m-slice partitioning of `order` (requires m | n).
std::uint64_t sliced_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order, std::uint32_t m);

struct SliceReport {
    std::uint32_t m = 1;
    bool exhaustive = true;
    std::uint64_t permutations = 0;
    std::int64_t min_diff = 0;
    std::int64_t max_diff = 0;
    Fraction mean_diff;
    std::uint64_t counterexamples = 0;
    std::vector<std::uint32_t> first_counterexample;
};

constexpr std::uint32_t max_exhaustive_docs = 8;

// Checks P(pi) - P^m(pi, g_m) >= 0 for every permutation when n_docs <= 8,
// otherwise for `samples` seeded random permutations.
SliceReport verify_slice_monotonicity(const TinyTermDoc& td, std::uint32_t m,
                                      std::uint64_t samples = 10000, std::uint64_t seed = 1);

struct DeltaMReport {
    std::uint32_t m = 1;
    std::uint64_t permutations = 0;
    std::uint64_t partitions = 0;
    // E over (pi, g) of P(pi) - P^m(pi, g), g a uniform labelled equal partition.
    Fraction by_partition;
    // E over pi of P(pi) - P^m(pi, g_m).
    Fraction by_slicing;

    bool identity_holds() const { return by_partition == by_slicing; }
};

// Exhaustive over all n! permutations and all labelled equal partitions.
// Throws if m does not divide n or the number of (pi, g) pairs exceeds max_pairs.
DeltaMReport expected_delta_m(const TinyTermDoc& td, std::uint32_t m,
                              std::uint64_t max_pairs = 50'000'000);

std::uint64_t equal_partition_count(std::uint32_t n, std::uint32_t m);

struct UrlExample {
    std::uint64_t size_before = 0;
    std::uint64_t approx_size_after = 0;
    std::int64_t exact_delta = 0;
    double approx_delta = 0.0; // (m-1)(log2 N1 + log2 N2) - 2m log2 m
};

// Postings list of one gap N1, R gaps of 1, one gap N2, R gaps of 1, before and
// (approximately) after partitioning into m nodes. Divisions by m are floored.
// Requires R >= m and N1, N2 >= R*m.
UrlExample url_partition_example(std::uint64_t n1, std::uint64_t n2, std::uint64_t run, std::uint32_t m);

struct UrnBound {
    double delta = 0.0;
    bool valid = false; // delta < 2e - 1
};

// delta_eps = sqrt((4m / b_q) * ln(m / eps))
UrnBound urn_delta_epsilon(std::uint64_t balls, std::uint32_t urns, double epsilon);

struct UrnTrialSpec {
    std::uint64_t balls = 0;
    std::uint32_t urns = 1;
    double epsilon = 0.01;
    std::uint64_t trials = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

struct UrnReport {
    UrnBound bound;
    double threshold = 0.0; // (b_q / m)(1 + delta_eps)
    std::uint64_t trials = 0;
    std::uint64_t covered = 0;
    double coverage = 0.0;
    std::uint64_t min_xmax = 0;
    std::uint64_t max_xmax = 0;
    bool xmax_at_least_mean = true; // x_max >= b_q / m in every trial
};

UrnReport urn_montecarlo(const UrnTrialSpec& spec);

} // namespace shardlab
