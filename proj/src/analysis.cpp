#include "shardlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

#include "shardlab/codecs.hpp"
#include "shardlab/random.hpp"

namespace shardlab {

namespace {

std::vector<std::vector<std::uint32_t>> terms_by_doc(const TinyTermDoc& td)
{
    std::vector<std::vector<std::uint32_t>> doc_terms(td.n_docs);
    for (std::uint32_t t = 0; t < td.term_docs.size(); ++t) {
        for (auto d : td.term_docs[t])
            doc_terms[d].push_back(t);
    }
    return doc_terms;
}

// Delta-coded size of all lists with the documents split by shard_of and
// numbered 1.. inside each shard following `order`.
std::uint64_t split_bits(const std::vector<std::vector<std::uint32_t>>& doc_terms, std::size_t n_terms,
                         std::span<const std::uint32_t> order, std::span<const std::uint32_t> shard_of,
                         std::uint32_t m)
{
    std::vector<std::uint32_t> next_id(m, 0);
    std::vector<std::uint32_t> last(n_terms * m, 0);
    std::uint64_t bits = 0;
    for (auto doc : order) {
        auto shard = shard_of[doc];
        auto id = ++next_id[shard];
        for (auto t : doc_terms[doc]) {
            auto& previous = last[t * m + shard];
            bits += delta_len(id - previous);
            previous = id;
        }
    }
    return bits;
}

std::vector<std::uint32_t> slice_labels(std::span<const std::uint32_t> order, std::uint32_t m)
{
    std::vector<std::uint32_t> shard_of(order.size());
    const std::size_t per_shard = order.size() / m;
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        shard_of[order[pos]] = static_cast<std::uint32_t>(pos / per_shard);
    return shard_of;
}

void require_divides(const TinyTermDoc& td, std::uint32_t m)
{
    if (m < 1 || td.n_docs % m != 0)
        throw Error(fmt::format("m={} must divide the document count {}", m, td.n_docs));
}

// Calls visit(shard_of) for every assignment of n documents to m labelled
// shards of n/m documents each.
void for_each_equal_partition(std::uint32_t n, std::uint32_t m,
                              const std::function<void(std::span<const std::uint32_t>)>& visit)
{
    std::vector<std::uint32_t> shard_of(n);
    std::vector<std::uint32_t> room(m, n / m);
    std::function<void(std::uint32_t)> place = [&](std::uint32_t doc) {
        if (doc == n) {
            visit(shard_of);
            return;
        }
        for (std::uint32_t s = 0; s < m; ++s) {
            if (room[s] == 0)
                continue;
            --room[s];
            shard_of[doc] = s;
            place(doc + 1);
            ++room[s];
        }
    };
    place(0);
}

std::uint64_t factorial(std::uint32_t n)
{
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace

Fraction Fraction::of(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw Error("fraction with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    auto g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

std::string Fraction::str() const
{
    if (den == 1)
        return fmt::format("{}", num);
    return fmt::format("{}/{}", num, den);
}

bool Fraction::operator<(const Fraction& other) const
{
    using i128 = __int128;
    return i128(num) * other.den < i128(other.num) * den;
}

void TinyTermDoc::validate() const
{
    if (n_docs == 0)
        throw Error("term-document instance has no documents");
    for (const auto& docs : term_docs) {
        if (docs.empty())
            throw Error("term-document instance has a term without documents");
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (docs[i] >= n_docs || (i > 0 && docs[i - 1] >= docs[i]))
                throw Error("term document lists must be ascending and within range");
        }
    }
}

TinyTermDoc four_doc_instance()
{
    return {4, {{0, 2}, {1, 3}, {0, 1, 2, 3}}};
}

std::uint64_t single_node_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order)
{
    std::vector<std::uint32_t> one_shard(td.n_docs, 0);
    return partitioned_bits(td, order, one_shard, 1);
}

std::uint64_t partitioned_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order,
                               std::span<const std::uint32_t> shard_of, std::uint32_t m)
{
    td.validate();
    if (order.size() != td.n_docs || shard_of.size() != td.n_docs)
        throw Error("order and partition must cover every document");
    return split_bits(terms_by_doc(td), td.term_docs.size(), order, shard_of, m);
}

std::uint64_t sliced_bits(const TinyTermDoc& td, std::span<const std::uint32_t> order, std::uint32_t m)
{
    require_divides(td, m);
    auto labels = slice_labels(order, m);
    return partitioned_bits(td, order, labels, m);
}

SliceReport verify_slice_monotonicity(const TinyTermDoc& td, std::uint32_t m, std::uint64_t samples,
                                      std::uint64_t seed)
{
    td.validate();
    require_divides(td, m);
    const auto doc_terms = terms_by_doc(td);
    const auto n_terms = td.term_docs.size();
    std::vector<std::uint32_t> single(td.n_docs, 0);

    SliceReport report;
    report.m = m;
    report.exhaustive = td.n_docs <= max_exhaustive_docs;
    report.min_diff = std::numeric_limits<std::int64_t>::max();
    report.max_diff = std::numeric_limits<std::int64_t>::min();
    std::int64_t total = 0;

    auto check = [&](std::span<const std::uint32_t> order) {
        auto before = static_cast<std::int64_t>(split_bits(doc_terms, n_terms, order, single, 1));
        auto labels = slice_labels(order, m);
        auto after = static_cast<std::int64_t>(split_bits(doc_terms, n_terms, order, labels, m));
        auto diff = before - after;
        report.min_diff = std::min(report.min_diff, diff);
        report.max_diff = std::max(report.max_diff, diff);
        total += diff;
        ++report.permutations;
        if (diff < 0 && report.counterexamples++ == 0)
            report.first_counterexample.assign(order.begin(), order.end());
    };

    std::vector<std::uint32_t> order(td.n_docs);
    std::iota(order.begin(), order.end(), 0);
    if (report.exhaustive) {
        do {
            check(order);
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        Rng rng(seed);
        for (std::uint64_t i = 0; i < samples; ++i) {
            shuffle(std::span(order), rng);
            check(order);
        }
    }
    report.mean_diff = Fraction::of(total, static_cast<std::int64_t>(report.permutations));
    return report;
}

std::uint64_t equal_partition_count(std::uint32_t n, std::uint32_t m)
{
    if (m < 1 || n % m != 0)
        throw Error("m must divide n");
    // n! / ((n/m)!)^m, built as a product of binomials to stay exact.
    std::uint64_t count = 1;
    std::uint32_t left = n;
    const std::uint32_t k = n / m;
    for (std::uint32_t s = 0; s < m; ++s) {
        std::uint64_t binom = 1;
        for (std::uint32_t i = 1; i <= k; ++i)
            binom = binom * (left - k + i) / i;
        count *= binom;
        left -= k;
    }
    return count;
}

DeltaMReport expected_delta_m(const TinyTermDoc& td, std::uint32_t m, std::uint64_t max_pairs)
{
    td.validate();
    require_divides(td, m);
    if (td.n_docs > 20)
        throw Error("exhaustive enumeration is infeasible for more than 20 documents");
    const std::uint64_t permutations = factorial(td.n_docs);
    const std::uint64_t partitions = equal_partition_count(td.n_docs, m);
    if (partitions > max_pairs / permutations)
        throw Error(fmt::format("enumeration of {} x {} (permutation, partition) pairs exceeds the limit {}",
                                permutations, partitions, max_pairs));

    const auto doc_terms = terms_by_doc(td);
    const auto n_terms = td.term_docs.size();
    std::vector<std::uint32_t> single(td.n_docs, 0);

    std::vector<std::vector<std::uint32_t>> orders;
    orders.reserve(permutations);
    std::vector<std::uint32_t> order(td.n_docs);
    std::iota(order.begin(), order.end(), 0);
    do {
        orders.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));

    std::int64_t sum_single = 0;
    std::int64_t sum_sliced = 0;
    for (const auto& o : orders) {
        sum_single += static_cast<std::int64_t>(split_bits(doc_terms, n_terms, o, single, 1));
        sum_sliced += static_cast<std::int64_t>(split_bits(doc_terms, n_terms, o, slice_labels(o, m), m));
    }

    DeltaMReport report;
    report.m = m;
    report.permutations = permutations;
    report.partitions = partitions;
    std::int64_t sum_partitioned = 0;
    std::uint64_t visited = 0;
    for_each_equal_partition(td.n_docs, m, [&](std::span<const std::uint32_t> shard_of) {
        for (const auto& o : orders)
            sum_partitioned += static_cast<std::int64_t>(split_bits(doc_terms, n_terms, o, shard_of, m));
        ++visited;
    });
    if (visited != partitions)
        throw Error("partition enumeration count mismatch");

    auto n_perm = static_cast<std::int64_t>(permutations);
    auto n_part = static_cast<std::int64_t>(partitions);
    report.by_partition = Fraction::of(n_part * sum_single - sum_partitioned, n_perm * n_part);
    report.by_slicing = Fraction::of(sum_single - sum_sliced, n_perm);
    return report;
}

UrlExample url_partition_example(std::uint64_t n1, std::uint64_t n2, std::uint64_t run, std::uint32_t m)
{
    if (m < 1)
        throw Error("m must be at least 1");
    if (run < m || n1 < run * m || n2 < run * m)
        throw Error(fmt::format("need N1, N2 >= R*m and R >= m (N1={}, N2={}, R={}, m={})", n1, n2, run, m));
    UrlExample ex;
    ex.size_before = delta_len(n1) + delta_len(n2) + 2 * run * delta_len(1);
    ex.approx_size_after = m * (delta_len(n1 / m) + delta_len(n2 / m) + 2 * (run / m) * delta_len(1));
    ex.exact_delta = static_cast<std::int64_t>(ex.approx_size_after) - static_cast<std::int64_t>(ex.size_before);
    const double md = m;
    ex.approx_delta = (md - 1) * (std::log2(static_cast<double>(n1)) + std::log2(static_cast<double>(n2))) -
                      2 * md * std::log2(md);
    return ex;
}

UrnBound urn_delta_epsilon(std::uint64_t balls, std::uint32_t urns, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error("epsilon must lie in (0, 1)");
    if (urns < 1 || balls < urns)
        throw Error("need balls >= urns >= 1");
    const double m = urns;
    double delta = std::sqrt(4.0 * m / static_cast<double>(balls) * std::log(m / epsilon));
    return {delta, delta < 2.0 * std::numbers::e - 1.0};
}

void UrnTrialSpec::validate() const
{
    if (urns < 1 || balls < urns)
        throw Error("need balls >= urns >= 1");
    if (trials < 1)
        throw Error("need at least one trial");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error("epsilon must lie in (0, 1)");
}

UrnReport urn_montecarlo(const UrnTrialSpec& spec)
{
    spec.validate();
    UrnReport report;
    report.bound = urn_delta_epsilon(spec.balls, spec.urns, spec.epsilon);
    const double mean = static_cast<double>(spec.balls) / spec.urns;
    report.threshold = mean * (1.0 + report.bound.delta);
    report.trials = spec.trials;
    report.min_xmax = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::uint64_t> load(spec.urns);
    for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
        Rng rng(derive_seed(spec.seed, trial));
        std::fill(load.begin(), load.end(), 0);
        for (std::uint64_t ball = 0; ball < spec.balls; ++ball)
            ++load[uniform_below(rng, spec.urns)];
        auto xmax = *std::max_element(load.begin(), load.end());
        report.min_xmax = std::min(report.min_xmax, xmax);
        report.max_xmax = std::max(report.max_xmax, xmax);
        if (xmax * spec.urns < spec.balls)
            report.xmax_at_least_mean = false;
        if (static_cast<double>(xmax) <= report.threshold)
            ++report.covered;
    }
    report.coverage = static_cast<double>(report.covered) / static_cast<double>(spec.trials);
    return report;
}

} // namespace shardlab
