#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "shardlab/analysis.hpp"
#include "shardlab/corpus.hpp"
#include "shardlab/experiment.hpp"
#include "shardlab/indexcore.hpp"
#include "shardlab/ordering.hpp"
#include "shardlab/querysim.hpp"
#include "shardlab/sharding.hpp"

using namespace shardlab;

namespace {

using Overrides = std::map<std::string, std::string>;

struct FlagKey {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagKey synth_flags[] = {
    {"--n-docs", "synth.n_docs", "number of synthetic documents"},
    {"--n-hosts", "synth.n_hosts", "number of synthetic hosts"},
    {"--vocab-global", "synth.vocab_global", "global vocabulary size"},
    {"--vocab-per-host", "synth.vocab_per_host", "per-host vocabulary size"},
    {"--doc-len", "synth.doc_len_mean", "mean tokens drawn per document"},
    {"--host-locality", "synth.host_locality", "probability a token comes from the host vocabulary"},
    {"--zipf", "synth.zipf_exponent", "Zipf exponent of both vocabularies"},
    {"--drift", "synth.drift", "probability a page copies terms of the previous page"},
    {"--host-skew", "synth.host_size_skew", "Zipf exponent of host sizes (0 = uniform)"},
    {"--synth-seed", "synth.seed", "generator seed"},
};

constexpr FlagKey source_flags[] = {
    {"--corpus", "corpus", "corpus file (URL<TAB>body per line); synthetic when absent"},
    {"--stopwords", "stopwords", "stopword file, one token per line"},
};

void add_flags(CLI::App* app, Overrides& overrides, std::span<const FlagKey> flags)
{
    for (const auto& f : flags) {
        std::string key = f.key;
        app->add_option_function<std::string>(
            f.flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, f.help);
    }
}

void add_sweep_flags(CLI::App* app, Overrides& overrides, bool with_schemes)
{
    const FlagKey sweep[] = {
        {"--policies", "policies", "comma list of random, round-robin, url-slice, ih-url-slice, m-slice"},
        {"--schemes", "schemes", "comma list of rnd, url, ih-url, ih-rnd, kscn-tsp"},
        {"--codecs", "codecs", "comma list of delta, pfd"},
        {"--m", "m", "comma list of shard counts"},
        {"--seeds", "seeds", "comma list of seeds"},
        {"--queries", "queries", "query file, one query per line"},
        {"--synthetic-queries", "synthetic_queries", "draw this many queries from the corpus"},
        {"--out", "out", "output directory"},
    };
    for (const auto& f : sweep) {
        std::string_view flag = f.flag;
        if (!with_schemes && (flag == "--schemes" || flag == "--codecs" || flag == "--out"))
            continue;
        add_flags(app, overrides, std::span(&f, 1));
    }
}

ExperimentPlan make_plan(const std::optional<std::string>& config_path, const Overrides& overrides)
{
    ExperimentPlan plan;
    if (config_path)
        apply_config(plan, read_config(*config_path));
    apply_config(plan, overrides);
    return plan;
}

int run_ingest(const Overrides& overrides, const std::string& ordering_csv, const std::string& scheme,
               const std::string& assignment_csv, const std::string& policy, std::uint32_t m,
               std::uint64_t seed, const std::string& index_dump)
{
    auto plan = make_plan(std::nullopt, overrides);
    if (!plan.corpus_file)
        throw Error("ingest needs --corpus");
    auto corpus = load_corpus(plan);
    auto stats = corpus_stats(corpus);
    fmt::print("documents {}\ndistinct_terms {}\npostings {}\n", stats.documents, stats.distinct_terms,
               stats.postings);

    if (!ordering_csv.empty()) {
        auto ordering = order_documents(parse_scheme(scheme), corpus, all_documents(corpus), seed);
        write_file_atomically(ordering_csv, [&](std::ostream& out) { write_ordering_csv(out, ordering); });
    }
    if (!assignment_csv.empty()) {
        auto assignment = distribute(parse_policy(policy), corpus, m, seed);
        write_file_atomically(assignment_csv, [&](std::ostream& out) { write_assignment_csv(out, assignment); });
    }
    if (!index_dump.empty()) {
        auto ordering = order_documents(parse_scheme(scheme), corpus, all_documents(corpus), seed);
        auto index = build_index(corpus, ordering.sequence());
        write_file_atomically(index_dump, [&](std::ostream& out) { dump_index(out, corpus, index); });
    }
    return 0;
}

int run_synth(const Overrides& overrides, const std::string& out_path, const std::string& queries_out,
              std::size_t n_queries, std::uint64_t query_seed)
{
    ExperimentPlan plan;
    apply_config(plan, overrides);
    auto corpus = generate_synthetic(plan.synthetic);
    write_file_atomically(out_path, [&](std::ostream& out) { write_corpus(out, corpus); });
    auto stats = corpus_stats(corpus);
    fmt::print("wrote {} documents, {} distinct terms, {} postings to {}\n", stats.documents,
               stats.distinct_terms, stats.postings, out_path);
    if (!queries_out.empty()) {
        auto queries = generate_queries(corpus, n_queries, query_seed);
        write_file_atomically(queries_out, [&](std::ostream& out) { write_queries(out, queries); });
        fmt::print("wrote {} queries to {}\n", queries.size(), queries_out);
    }
    return 0;
}

int run_query_sim(const std::optional<std::string>& config, const Overrides& overrides, const std::string& csv)
{
    auto plan = make_plan(config, overrides);
    plan.validate();
    auto corpus = load_corpus(plan);
    auto queries = load_plan_queries(plan, corpus);
    if (queries.empty())
        throw Error("query-sim needs --queries or --synthetic-queries");

    std::vector<SurrogateRow> rows;
    for (auto policy : plan.policies) {
        for (auto m : plan.m_values) {
            for (auto seed : plan.seeds) {
                auto indexes = build_partitioned(corpus, policy, plan.schemes.front(), m, seed);
                auto report = average_surrogates(queries, indexes);
                rows.push_back({policy, m, seed, report.avg_td, report.avg_tc, report.evaluated});
            }
        }
    }
    if (csv.empty() || csv == "-") {
        write_surrogate_csv(std::cout, rows);
    } else {
        write_file_atomically(csv, [&](std::ostream& out) { write_surrogate_csv(out, rows); });
    }
    return 0;
}

struct VerifyArgs {
    std::string target;
    std::vector<std::uint32_t> m_values{2, 4};
    std::uint64_t n1 = 1 << 20;
    std::uint64_t n2 = 1 << 20;
    std::uint64_t run = 1 << 10;
    std::uint32_t url_m = 4;
    std::uint64_t balls = 100000;
    std::uint32_t urns = 100;
    double epsilon = 0.01;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string csv;
};

int run_verify(const VerifyArgs& args)
{
    bool ok = true;
    std::vector<std::string> csv_lines;
    auto report = [&](bool pass, const std::string& line) {
        fmt::print("{} {}\n", pass ? "PASS" : "FAIL", line);
        ok = ok && pass;
    };
    const auto td = four_doc_instance();

    if (args.target == "slice") {
        csv_lines.emplace_back("m,permutations,exhaustive,min_diff,max_diff,mean_diff,counterexamples");
        for (auto m : args.m_values) {
            auto r = verify_slice_monotonicity(td, m);
            report(r.counterexamples == 0,
                   fmt::format("slice m={}: {} permutations, diff in [{}, {}], mean {}, {} counterexamples", m,
                               r.permutations, r.min_diff, r.max_diff, r.mean_diff.str(), r.counterexamples));
            csv_lines.push_back(fmt::format("{},{},{},{},{},{:.3f},{}", m, r.permutations, r.exhaustive ? 1 : 0,
                                            r.min_diff, r.max_diff, r.mean_diff.value(), r.counterexamples));
        }
    } else if (args.target == "delta-m") {
        csv_lines.emplace_back("m,permutations,partitions,by_partition,by_slicing,identity");
        std::optional<Fraction> previous;
        for (std::uint32_t m = 1; m <= td.n_docs; ++m) {
            if (td.n_docs % m != 0)
                continue;
            auto r = expected_delta_m(td, m);
            bool monotone = !previous || *previous <= r.by_partition;
            report(r.identity_holds() && Fraction{} <= r.by_partition && monotone,
                   fmt::format("delta-m m={}: E(pi,g) = {}, E(pi) sliced = {}, identity {}, non-decreasing {}", m,
                               r.by_partition.str(), r.by_slicing.str(), r.identity_holds(), monotone));
            csv_lines.push_back(fmt::format("{},{},{},{:.3f},{:.3f},{}", m, r.permutations, r.partitions,
                                            r.by_partition.value(), r.by_slicing.value(),
                                            r.identity_holds() ? 1 : 0));
            previous = r.by_partition;
        }
    } else if (args.target == "url-example") {
        auto r = url_partition_example(args.n1, args.n2, args.run, args.url_m);
        report(true, fmt::format("url-example: before {} bits, after ~{} bits, delta {}, log approximation {:.3f}",
                                 r.size_before, r.approx_size_after, r.exact_delta, r.approx_delta));
        csv_lines.emplace_back("n1,n2,r,m,size_before,approx_size_after,exact_delta,approx_delta");
        csv_lines.push_back(fmt::format("{},{},{},{},{},{},{},{:.3f}", args.n1, args.n2, args.run, args.url_m,
                                        r.size_before, r.approx_size_after, r.exact_delta, r.approx_delta));
    } else if (args.target == "urn") {
        UrnTrialSpec spec{args.balls, args.urns, args.epsilon, args.trials, args.seed};
        auto r = urn_montecarlo(spec);
        bool pass = r.xmax_at_least_mean && (!r.bound.valid || r.coverage >= 1.0 - args.epsilon);
        report(pass, fmt::format("urn: delta_eps {:.4f} (valid {}), coverage {:.4f} over {} trials, "
                                 "x_max in [{}, {}], threshold {:.3f}",
                                 r.bound.delta, r.bound.valid, r.coverage, r.trials, r.min_xmax, r.max_xmax,
                                 r.threshold));
        csv_lines.emplace_back("balls,urns,epsilon,trials,delta_eps,threshold,coverage,min_xmax,max_xmax");
        csv_lines.push_back(fmt::format("{},{},{},{},{:.4f},{:.3f},{:.4f},{},{}", args.balls, args.urns,
                                        args.epsilon, args.trials, r.bound.delta, r.threshold, r.coverage,
                                        r.min_xmax, r.max_xmax));
    } else {
        throw Error(fmt::format("unknown verify target '{}'", args.target));
    }

    if (!args.csv.empty()) {
        write_file_atomically(args.csv, [&](std::ostream& out) {
            for (const auto& line : csv_lines)
                out << line << '\n';
        });
    }
    return ok ? 0 : 1;
}

int run_slope(const std::string& csv, const std::string& x, const std::string& y,
              const std::vector<std::string>& where)
{
    std::vector<std::pair<std::string, std::string>> filters;
    for (const auto& clause : where) {
        auto eq = clause.find('=');
        if (eq == std::string::npos)
            throw Error(fmt::format("--where expects column=value, got '{}'", clause));
        filters.emplace_back(clause.substr(0, eq), clause.substr(eq + 1));
    }
    auto [xs, ys] = read_csv_columns(csv, x, y, filters);
    fmt::print("{:.3f}\n", fit_loglog_slope(xs, ys));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"shardlab: index partitioning vs. docId-ordering compression experiments"};
    app.require_subcommand(1);

    Overrides ingest_over;
    std::string ordering_csv, assignment_csv, index_dump, scheme = "url", policy = "random";
    std::uint32_t ingest_m = 1;
    std::uint64_t ingest_seed = 1;
    auto* ingest = app.add_subcommand("ingest", "load a corpus file and print its statistics");
    add_flags(ingest, ingest_over, source_flags);
    ingest->add_option("--ordering-csv", ordering_csv, "write doc_key,docid for --scheme");
    ingest->add_option("--scheme", scheme, "ordering scheme for --ordering-csv and --index-dump");
    ingest->add_option("--assignment-csv", assignment_csv, "write doc_key,shard for --policy and --m");
    ingest->add_option("--policy", policy, "distribution policy for --assignment-csv");
    ingest->add_option("--m", ingest_m, "shard count for --assignment-csv");
    ingest->add_option("--seed", ingest_seed, "seed for randomized schemes and policies");
    ingest->add_option("--index-dump", index_dump, "write the single-node index as term<TAB>docids");

    Overrides synth_over;
    std::string synth_out, synth_queries;
    std::size_t synth_n_queries = 100;
    std::uint64_t synth_query_seed = 1;
    auto* synth = app.add_subcommand("synth", "generate a synthetic host-clustered corpus file");
    add_flags(synth, synth_over, synth_flags);
    synth->add_option("--out", synth_out, "corpus file to write")->required();
    synth->add_option("--queries-out", synth_queries, "also write a query file drawn from the corpus");
    synth->add_option("--n-queries", synth_n_queries, "number of queries for --queries-out");
    synth->add_option("--query-seed", synth_query_seed, "seed for --queries-out");

    Overrides exp_over;
    std::optional<std::string> exp_config;
    auto* experiment = app.add_subcommand("experiment", "sweep policy x scheme x codec x m x seed into CSVs");
    experiment->add_option("--config", exp_config, "key=value plan file; flags override it");
    add_flags(experiment, exp_over, source_flags);
    add_flags(experiment, exp_over, synth_flags);
    add_sweep_flags(experiment, exp_over, true);

    Overrides qs_over;
    std::optional<std::string> qs_config;
    std::string qs_csv;
    auto* query_sim = app.add_subcommand("query-sim", "average query-time surrogates per policy and m");
    query_sim->add_option("--config", qs_config, "key=value plan file; flags override it");
    add_flags(query_sim, qs_over, source_flags);
    add_flags(query_sim, qs_over, synth_flags);
    add_sweep_flags(query_sim, qs_over, false);
    query_sim->add_option("--csv", qs_csv, "output CSV (stdout by default)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "check the analytical claims on small instances");
    verify->add_option("target", verify_args.target, "slice | delta-m | url-example | urn")
        ->required()
        ->check(CLI::IsMember({"slice", "delta-m", "url-example", "urn"}));
    verify->add_option("--m", verify_args.m_values, "slice counts for 'slice'")->delimiter(',');
    verify->add_option("--n1", verify_args.n1, "first large gap for 'url-example'");
    verify->add_option("--n2", verify_args.n2, "second large gap for 'url-example'");
    verify->add_option("--run", verify_args.run, "run length R for 'url-example'");
    verify->add_option("--nodes", verify_args.url_m, "node count for 'url-example'");
    verify->add_option("--balls", verify_args.balls, "balls b_q for 'urn'");
    verify->add_option("--urns", verify_args.urns, "urns m for 'urn'");
    verify->add_option("--epsilon", verify_args.epsilon, "epsilon for 'urn'");
    verify->add_option("--trials", verify_args.trials, "Monte Carlo trials for 'urn'");
    verify->add_option("--seed", verify_args.seed, "seed for 'urn'");
    verify->add_option("--csv", verify_args.csv, "also write raw numbers as CSV");

    std::string slope_csv, slope_x = "m", slope_y = "avg_td";
    std::vector<std::string> slope_where;
    auto* slope = app.add_subcommand("slope", "least-squares slope of a CSV column pair in log-log scale");
    slope->add_option("--csv", slope_csv, "input CSV")->required();
    slope->add_option("--x", slope_x, "x column");
    slope->add_option("--y", slope_y, "y column");
    slope->add_option("--where", slope_where, "keep rows with column=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest)
            return run_ingest(ingest_over, ordering_csv, scheme, assignment_csv, policy, ingest_m, ingest_seed,
                              index_dump);
        if (*synth)
            return run_synth(synth_over, synth_out, synth_queries, synth_n_queries, synth_query_seed);
        if (*experiment) {
            for (const auto& path : run_experiment_files(make_plan(exp_config, exp_over)))
                fmt::print("wrote {}\n", path.string());
            return 0;
        }
        if (*query_sim)
            return run_query_sim(qs_config, qs_over, qs_csv);
        if (*verify)
            return run_verify(verify_args);
        if (*slope)
            return run_slope(slope_csv, slope_x, slope_y, slope_where);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
