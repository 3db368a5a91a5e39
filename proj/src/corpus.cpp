#include "shardlab/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/core.h>

namespace shardlab {

namespace {

constexpr std::size_t max_token_length = 64;

// Lucene's classic English stopword set.
constexpr std::array<std::string_view, 33> english_stopwords = {
    "a",    "an",   "and",   "are",  "as",    "at",    "be",   "but",  "by",
    "for",  "if",   "in",    "into", "is",    "it",    "no",   "not",  "of",
    "on",   "or",   "such",  "that", "the",   "their", "then", "there",
    "these", "they", "this", "to",   "was",   "will",  "with",
};

bool is_token_byte(unsigned char c)
{
    return c < 0x80 && std::isalnum(c);
}

} // namespace

TermId Vocabulary::intern(std::string_view token)
{
    auto [it, inserted] = ids_.try_emplace(std::string(token), static_cast<TermId>(tokens_.size()));
    if (inserted)
        tokens_.emplace_back(token);
    return it->second;
}

std::optional<TermId> Vocabulary::find(std::string_view token) const
{
    auto it = ids_.find(std::string(token));
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

bool CorpusBuilder::add(std::string url, const std::vector<std::string>& tokens)
{
    if (tokens.empty())
        return false;
    Document doc;
    doc.key = static_cast<DocKey>(corpus_.docs_.size());
    doc.host = extract_host(url);
    doc.url = std::move(url);
    doc.terms.reserve(tokens.size());
    for (const auto& token : tokens)
        doc.terms.push_back(corpus_.vocab_.intern(token));
    std::sort(doc.terms.begin(), doc.terms.end());
    doc.terms.erase(std::unique(doc.terms.begin(), doc.terms.end()), doc.terms.end());

    corpus_.df_.resize(corpus_.vocab_.size(), 0);
    for (TermId t : doc.terms)
        ++corpus_.df_[t];
    corpus_.total_postings_ += doc.terms.size();
    corpus_.docs_.push_back(std::move(doc));
    return true;
}

Corpus CorpusBuilder::build() &&
{
    if (corpus_.docs_.empty())
        throw Error("corpus is empty after removing empty documents");
    return std::move(corpus_);
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_token_byte(static_cast<unsigned char>(text[i])))
            ++i;
        std::size_t start = i;
        while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i])))
            ++i;
        if (i == start || i - start > max_token_length)
            continue;
        std::string token(text.substr(start, i - start));
        for (auto& c : token)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::string extract_host(std::string_view url)
{
    if (auto scheme = url.find("://"); scheme != std::string_view::npos)
        url.remove_prefix(scheme + 3);
    return std::string(url.substr(0, url.find('/')));
}

const StopwordSet& default_stopwords()
{
    static const StopwordSet words = [] {
        StopwordSet set;
        for (auto word : english_stopwords)
            set.emplace(word);
        return set;
    }();
    return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open stopword file '{}'", path.string()));
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        for (auto& token : tokenize(line))
            words.insert(std::move(token));
    }
    return words;
}

Corpus ingest_corpus(std::istream& in, const StopwordSet& stopwords)
{
    CorpusBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(fmt::format("line {}: malformed record, expected URL<TAB>body", line_no));
        std::string url = line.substr(0, tab);
        if (extract_host(url).empty())
            throw Error(fmt::format("line {}: malformed record, URL '{}' has no host", line_no, url));

        auto tokens = tokenize(std::string_view(line).substr(tab + 1));
        std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
        builder.add(std::move(url), tokens);
    }
    return std::move(builder).build();
}

Corpus ingest_corpus(const std::filesystem::path& path,
                     const std::optional<std::filesystem::path>& stopwords)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open corpus file '{}'", path.string()));
    if (stopwords)
        return ingest_corpus(in, load_stopwords(*stopwords));
    return ingest_corpus(in, default_stopwords());
}

void write_corpus(std::ostream& out, const Corpus& corpus)
{
    for (const auto& doc : corpus.documents()) {
        out << doc.url << '\t';
        for (std::size_t i = 0; i < doc.terms.size(); ++i) {
            if (i > 0)
                out << ' ';
            out << corpus.vocab().token(doc.terms[i]);
        }
        out << '\n';
    }
}

CorpusStats corpus_stats(const Corpus& corpus)
{
    CorpusStats stats{corpus.size(), corpus.vocab().size(), corpus.total_postings()};
    std::uint64_t from_docs = 0;
    for (const auto& doc : corpus.documents())
        from_docs += doc.terms.size();
    std::uint64_t from_df = 0;
    for (auto df : corpus.df())
        from_df += df;
    if (from_docs != stats.postings || from_df != stats.postings)
        throw Error("corpus posting counts are inconsistent");
    return stats;
}

} // namespace shardlab
