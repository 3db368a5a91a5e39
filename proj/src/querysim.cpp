#include "shardlab/querysim.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>

#include <fmt/core.h>

#include "shardlab/random.hpp"

namespace shardlab {

Query parse_query(std::string_view line, const Vocabulary& vocab)
{
    Query query{std::string(line), {}};
    for (const auto& token : tokenize(line)) {
        if (auto id = vocab.find(token))
            query.terms.push_back(*id);
    }
    std::sort(query.terms.begin(), query.terms.end());
    query.terms.erase(std::unique(query.terms.begin(), query.terms.end()), query.terms.end());
    return query;
}

std::vector<Query> load_queries(std::istream& in, const Vocabulary& vocab)
{
    std::vector<Query> queries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        queries.push_back(parse_query(line, vocab));
        if (!queries.back().evaluable())
            std::clog << "warning: query '" << line << "' has no indexed term and is excluded\n";
    }
    if (queries.empty())
        throw Error("query file contains no queries");
    return queries;
}

std::vector<Query> load_queries(const std::filesystem::path& path, const Vocabulary& vocab)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open query file '{}'", path.string()));
    return load_queries(in, vocab);
}

std::vector<Query> generate_queries(const Corpus& corpus, std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Query> queries;
    queries.reserve(count);
    while (queries.size() < count) {
        const auto& doc = corpus.document(static_cast<DocKey>(uniform_below(rng, corpus.size())));
        std::vector<TermId> pool = doc.terms;
        shuffle(std::span(pool), rng);
        std::size_t length = std::min<std::size_t>(2 + uniform_below(rng, 3), pool.size());
        Query query;
        query.terms.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(length));
        for (std::size_t i = 0; i < length; ++i) {
            if (i > 0)
                query.raw += ' ';
            query.raw += corpus.vocab().token(query.terms[i]);
        }
        std::sort(query.terms.begin(), query.terms.end());
        queries.push_back(std::move(query));
    }
    return queries;
}

void write_queries(std::ostream& out, std::span<const Query> queries)
{
    for (const auto& query : queries)
        out << query.raw << '\n';
}

std::uint64_t t_disjunctive(const Query& query, std::span<const ShardIndex> indexes)
{
    std::uint64_t slowest = 0;
    for (const auto& index : indexes) {
        std::uint64_t work = 0;
        for (TermId t : query.terms)
            work += index.length(t);
        slowest = std::max(slowest, work);
    }
    return slowest;
}

std::uint64_t t_conjunctive(const Query& query, std::span<const ShardIndex> indexes)
{
    std::uint64_t slowest = 0;
    for (const auto& index : indexes) {
        std::uint64_t rarest = std::numeric_limits<std::uint64_t>::max();
        for (TermId t : query.terms)
            rarest = std::min(rarest, index.length(t));
        if (query.terms.empty())
            rarest = 0;
        slowest = std::max(slowest, rarest);
    }
    return slowest;
}

SurrogateReport average_surrogates(std::span<const Query> queries, std::span<const ShardIndex> indexes)
{
    SurrogateReport report;
    double sum_td = 0.0;
    double sum_tc = 0.0;
    for (const auto& query : queries) {
        if (!query.evaluable()) {
            ++report.excluded;
            continue;
        }
        auto td = t_disjunctive(query, indexes);
        auto tc = t_conjunctive(query, indexes);
        report.per_query.emplace_back(td, tc);
        sum_td += static_cast<double>(td);
        sum_tc += static_cast<double>(tc);
    }
    report.evaluated = report.per_query.size();
    if (report.evaluated == 0)
        throw Error("no evaluable queries");
    report.avg_td = sum_td / static_cast<double>(report.evaluated);
    report.avg_tc = sum_tc / static_cast<double>(report.evaluated);
    return report;
}

} // namespace shardlab
