#include "shardlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/core.h>

#include "shardlab/indexcore.hpp"
#include "shardlab/metrics.hpp"

namespace shardlab {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto end = s.find(sep, start);
        parts.emplace_back(trim(s.substr(start, end - start)));
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return parts;
}

template <typename T>
T parse_number(const std::string& key, std::string_view text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(fmt::format("config key '{}': cannot parse '{}' as a number", key, text));
    return value;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& value, Parse parse)
{
    std::vector<T> items;
    for (const auto& part : split(value, ',')) {
        if (!part.empty())
            items.push_back(parse(part));
    }
    return items;
}

std::string fixed3(double v)
{
    return fmt::format("{:.3f}", v);
}

} // namespace

void ExperimentPlan::validate() const
{
    if (policies.empty() || schemes.empty() || codecs.empty() || m_values.empty() || seeds.empty())
        throw Error("experiment plan needs non-empty policy, scheme, codec, m and seed lists");
    for (auto m : m_values) {
        if (m < 1)
            throw Error("every m value must be at least 1");
    }
    if (!corpus_file)
        synthetic.validate();
}

std::vector<ShardIndex> build_partitioned(const Corpus& corpus, Policy policy, Scheme scheme,
                                          std::uint32_t m, std::uint64_t seed)
{
    if (policy == Policy::m_slice) {
        auto ordering = order_documents(scheme, corpus, all_documents(corpus), seed);
        return build_sliced_indexes(corpus, ordering, m);
    }
    auto assignment = distribute(policy, corpus, m, seed);
    return build_shard_indexes(corpus, assignment, scheme, seed);
}

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentPlan& plan, std::span<const Query> queries)
{
    plan.validate();
    using SizeKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;
    std::vector<std::pair<SizeKey, SizeRow>> sized;
    ExperimentResult result;

    for (std::size_t pi = 0; pi < plan.policies.size(); ++pi) {
        for (std::size_t mi = 0; mi < plan.m_values.size(); ++mi) {
            for (std::size_t si = 0; si < plan.seeds.size(); ++si) {
                const auto policy = plan.policies[pi];
                const auto m = plan.m_values[mi];
                const auto seed = plan.seeds[si];
                for (std::size_t ki = 0; ki < plan.schemes.size(); ++ki) {
                    auto indexes = build_partitioned(corpus, policy, plan.schemes[ki], m, seed);
                    for (std::size_t ci = 0; ci < plan.codecs.size(); ++ci) {
                        auto report = bits_per_posting(indexes, plan.codecs[ci]);
                        SizeRow row{policy, plan.schemes[ki], plan.codecs[ci], m, seed, corpus.size(),
                                    report.postings, report.total_bits, report.overhead_bits, report.bpp,
                                    report.bpp_oh};
                        sized.emplace_back(SizeKey{pi, ki, ci, mi, si}, row);
                    }
                    // Postings lengths do not depend on the scheme, except
                    // through m-slice where it picks the slices; use the first.
                    if (ki == 0 && !queries.empty()) {
                        auto surrogates = average_surrogates(queries, indexes);
                        result.surrogates.push_back({policy, m, seed, surrogates.avg_td, surrogates.avg_tc,
                                                     surrogates.evaluated});
                    }
                }
            }
        }
    }
    std::stable_sort(sized.begin(), sized.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    result.sizes.reserve(sized.size());
    for (auto& [key, row] : sized)
        result.sizes.push_back(row);
    return result;
}

Corpus load_corpus(const ExperimentPlan& plan)
{
    if (plan.corpus_file)
        return ingest_corpus(*plan.corpus_file, plan.stopwords);
    return generate_synthetic(plan.synthetic);
}

std::vector<Query> load_plan_queries(const ExperimentPlan& plan, const Corpus& corpus)
{
    if (plan.query_file)
        return load_queries(*plan.query_file, corpus.vocab());
    if (plan.synthetic_queries > 0)
        return generate_queries(corpus, plan.synthetic_queries, plan.seeds.front());
    return {};
}

void write_size_csv(std::ostream& out, std::span<const SizeRow> rows)
{
    out << size_csv_header << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", policy_name(r.policy), scheme_name(r.scheme),
                           codec_name(r.codec), r.m, r.seed, r.docs, r.postings, r.total_bits,
                           fixed3(r.overhead_bits), fixed3(r.bpp), fixed3(r.bpp_oh));
    }
}

void write_surrogate_csv(std::ostream& out, std::span<const SurrogateRow> rows)
{
    out << surrogate_csv_header << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{}\n", policy_name(r.policy), r.m, r.seed, fixed3(r.avg_td),
                           fixed3(r.avg_tc), r.queries_evaluated);
    }
}

void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer)
{
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(fmt::format("cannot write '{}'", temp.string()));
        writer(out);
        out.flush();
        if (!out)
            throw Error(fmt::format("failed writing '{}'", temp.string()));
    }
    std::filesystem::rename(temp, path);
}

std::vector<std::filesystem::path> run_experiment_files(const ExperimentPlan& plan)
{
    plan.validate();
    auto corpus = load_corpus(plan);
    auto queries = load_plan_queries(plan, corpus);
    auto result = run_experiment(corpus, plan, queries);

    std::filesystem::create_directories(plan.output_dir);
    std::vector<std::filesystem::path> written;
    auto sizes_path = plan.output_dir / "sizes.csv";
    write_file_atomically(sizes_path, [&](std::ostream& out) { write_size_csv(out, result.sizes); });
    written.push_back(sizes_path);
    if (!queries.empty()) {
        auto surrogate_path = plan.output_dir / "surrogates.csv";
        write_file_atomically(surrogate_path,
                              [&](std::ostream& out) { write_surrogate_csv(out, result.surrogates); });
        written.push_back(surrogate_path);
    }
    return written;
}

std::map<std::string, std::string> parse_config(std::istream& in)
{
    std::map<std::string, std::string> config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw Error(fmt::format("config line {}: expected key=value", line_no));
        config[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
    }
    return config;
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open config file '{}'", path.string()));
    return parse_config(in);
}

void apply_config(ExperimentPlan& plan, const std::map<std::string, std::string>& config)
{
    for (const auto& [key, value] : config) {
        auto& s = plan.synthetic;
        if (key == "corpus")
            plan.corpus_file = value;
        else if (key == "stopwords")
            plan.stopwords = value;
        else if (key == "queries")
            plan.query_file = value;
        else if (key == "synthetic_queries")
            plan.synthetic_queries = parse_number<std::size_t>(key, value);
        else if (key == "out")
            plan.output_dir = value;
        else if (key == "policies")
            plan.policies = parse_list<Policy>(value, [](const std::string& v) { return parse_policy(v); });
        else if (key == "schemes")
            plan.schemes = parse_list<Scheme>(value, [](const std::string& v) { return parse_scheme(v); });
        else if (key == "codecs")
            plan.codecs = parse_list<Codec>(value, [](const std::string& v) { return parse_codec(v); });
        else if (key == "m")
            plan.m_values = parse_list<std::uint32_t>(
                value, [&](const std::string& v) { return parse_number<std::uint32_t>(key, v); });
        else if (key == "seeds")
            plan.seeds = parse_list<std::uint64_t>(
                value, [&](const std::string& v) { return parse_number<std::uint64_t>(key, v); });
        else if (key == "synth.n_docs")
            s.n_docs = parse_number<std::uint32_t>(key, value);
        else if (key == "synth.n_hosts")
            s.n_hosts = parse_number<std::uint32_t>(key, value);
        else if (key == "synth.vocab_global")
            s.vocab_global = parse_number<std::uint32_t>(key, value);
        else if (key == "synth.vocab_per_host")
            s.vocab_per_host = parse_number<std::uint32_t>(key, value);
        else if (key == "synth.doc_len_mean")
            s.doc_len_mean = parse_number<std::uint32_t>(key, value);
        else if (key == "synth.host_locality")
            s.host_locality = parse_number<double>(key, value);
        else if (key == "synth.zipf_exponent")
            s.zipf_exponent = parse_number<double>(key, value);
        else if (key == "synth.drift")
            s.drift = parse_number<double>(key, value);
        else if (key == "synth.host_size_skew")
            s.host_size_skew = parse_number<double>(key, value);
        else if (key == "synth.seed")
            s.seed = parse_number<std::uint64_t>(key, value);
        else
            throw Error(fmt::format("unknown config key '{}'", key));
    }
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw Error("slope fit needs as many y values as x values");
    if (x.size() < 2)
        throw Error("slope fit needs at least two points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw Error("slope fit needs positive values");
        lx.push_back(std::log2(x[i]));
        ly.push_back(std::log2(y[i]));
    }
    const double n = static_cast<double>(lx.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mean_x += lx[i] / n;
        mean_y += ly[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
        sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
    }
    if (sxx == 0.0)
        throw Error("slope fit needs at least two distinct x values");
    return sxy / sxx;
}

std::pair<std::vector<double>, std::vector<double>>
read_csv_columns(const std::filesystem::path& path, const std::string& x_col, const std::string& y_col,
                 const std::vector<std::pair<std::string, std::string>>& filters)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open CSV '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line))
        throw Error(fmt::format("CSV '{}' is empty", path.string()));
    auto header = split(line, ',');
    auto column = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw Error(fmt::format("CSV '{}' has no column '{}'", path.string(), name));
        return static_cast<std::size_t>(it - header.begin());
    };
    auto xi = column(x_col);
    auto yi = column(y_col);
    std::vector<std::pair<std::size_t, std::string>> wanted;
    for (const auto& [name, value] : filters)
        wanted.emplace_back(column(name), value);

    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto fields = split(line, ',');
        if (fields.size() != header.size())
            throw Error(fmt::format("CSV '{}': row has {} fields, header has {}", path.string(), fields.size(),
                                    header.size()));
        bool keep = std::all_of(wanted.begin(), wanted.end(),
                                [&](const auto& f) { return fields[f.first] == f.second; });
        if (!keep)
            continue;
        xs.push_back(parse_number<double>(x_col, fields[xi]));
        ys.push_back(parse_number<double>(y_col, fields[yi]));
    }
    return {std::move(xs), std::move(ys)};
}

} // namespace shardlab
