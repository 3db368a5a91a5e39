#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "shardlab/common.hpp"

namespace shardlab {

struct Document {
    DocKey key = 0;
    std::string url;
    std::string host;
    std::vector<TermId> terms; // strictly ascending

    bool operator==(const Document&) const = default;
};

// Token <-> TermId table. Ids are dense and handed out in first-seen order.
class Vocabulary {
public:
    TermId intern(std::string_view token);
    std::optional<TermId> find(std::string_view token) const;
    const std::string& token(TermId id) const { return tokens_.at(id); }
    std::size_t size() const { return tokens_.size(); }

    bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TermId> ids_;
};

// Immutable document collection. Build through CorpusBuilder.
class Corpus {
public:
    const std::vector<Document>& documents() const { return docs_; }
    const Document& document(DocKey key) const { return docs_.at(key); }
    std::size_t size() const { return docs_.size(); }
    const Vocabulary& vocab() const { return vocab_; }
    std::uint64_t df(TermId term) const { return df_.at(term); }
    const std::vector<std::uint64_t>& df() const { return df_; }
    std::uint64_t total_postings() const { return total_postings_; }

    bool operator==(const Corpus&) const = default;

private:
    friend class CorpusBuilder;

    std::vector<Document> docs_;
    Vocabulary vocab_;
    std::vector<std::uint64_t> df_;
    std::uint64_t total_postings_ = 0;
};

class CorpusBuilder {
public:
    // Adds a document from already-normalized tokens. Duplicate tokens collapse;
    // a document without tokens is skipped and false is returned.
    bool add(std::string url, const std::vector<std::string>& tokens);

    // Throws if no document was added.
    Corpus build() &&;

private:
    Corpus corpus_;
};

struct CorpusStats {
    std::size_t documents = 0;
    std::size_t distinct_terms = 0;
    std::uint64_t postings = 0;

    bool operator==(const CorpusStats&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

// Splits on non-alphanumeric bytes and lowercases. Tokens longer than 64
// bytes are dropped. Bytes >= 0x80 count as separators.
std::vector<std::string> tokenize(std::string_view text);

// Text between the scheme (if any) and the first '/'.
std::string extract_host(std::string_view url);

const StopwordSet& default_stopwords();
StopwordSet load_stopwords(const std::filesystem::path& path);

// Corpus file: one "URL<TAB>body" record per line.
Corpus ingest_corpus(std::istream& in, const StopwordSet& stopwords);
Corpus ingest_corpus(const std::filesystem::path& path,
                     const std::optional<std::filesystem::path>& stopwords = std::nullopt);

// Writes the corpus back in the corpus file format (body = tokens in term order).
void write_corpus(std::ostream& out, const Corpus& corpus);

CorpusStats corpus_stats(const Corpus& corpus);

struct SyntheticSpec {
    std::uint32_t n_docs = 10000;
    std::uint32_t n_hosts = 100;
    std::uint32_t vocab_global = 20000;
    std::uint32_t vocab_per_host = 400;
    std::uint32_t doc_len_mean = 40;
    double host_locality = 0.7;
    double zipf_exponent = 1.0;
    double drift = 0.5;
    // Zipf exponent of host sizes; 0 gives equally likely hosts.
    double host_size_skew = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

// Host-clustered corpus; a pure function of the spec. See synthetic.cpp for
// the generation model.
Corpus generate_synthetic(const SyntheticSpec& spec);

} // namespace shardlab
