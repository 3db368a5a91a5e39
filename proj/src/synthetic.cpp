#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "shardlab/corpus.hpp"
#include "shardlab/random.hpp"

// Generation model. Host sizes follow a Zipf law (exponent host_size_skew)
// over a seeded random ranking of the hosts, with at least one page per host.
// Every host owns a private vocabulary of vocab_per_host words; all hosts share a global vocabulary of vocab_global words. Both are
// Zipf-distributed by rank. A page of length L draws L tokens independently:
// from its host's vocabulary with probability host_locality, otherwise from
// the global one. With probability drift a page (other than the first of its
// host) first copies each term of the previous page of the same host with
// probability 1/2 and only draws the remaining tokens. Pages are numbered per
// host so that URL order visits hosts in order and pages in sequence. The
// corpus lists documents in a seeded random (crawl-like) order.

namespace shardlab {

namespace {

constexpr double reuse_probability = 0.5;

class ZipfSampler {
public:
    ZipfSampler(std::uint32_t n, double exponent) : cdf_(n)
    {
        double total = 0.0;
        for (std::uint32_t rank = 0; rank < n; ++rank) {
            total += 1.0 / std::pow(static_cast<double>(rank + 1), exponent);
            cdf_[rank] = total;
        }
    }

    std::uint32_t operator()(Rng& rng) const
    {
        double u = unit_real(rng) * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
    }

private:
    std::vector<double> cdf_;
};

struct Page {
    std::uint32_t host;
    std::uint32_t seq;
    std::vector<std::string> tokens;
};

} // namespace

void SyntheticSpec::validate() const
{
    if (n_hosts < 1 || n_docs < n_hosts)
        throw Error(fmt::format("synthetic spec needs n_docs >= n_hosts >= 1 (got {} docs, {} hosts)",
                                n_docs, n_hosts));
    if (vocab_global < 1 || vocab_per_host < 1 || doc_len_mean < 1)
        throw Error("synthetic spec needs positive vocabulary sizes and document length");
    auto is_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!is_probability(host_locality) || !is_probability(drift))
        throw Error("host_locality and drift must lie in [0, 1]");
    if (!(zipf_exponent > 0.0))
        throw Error("zipf_exponent must be positive");
    if (!(host_size_skew >= 0.0))
        throw Error("host_size_skew must be non-negative");
}

Corpus generate_synthetic(const SyntheticSpec& spec)
{
    spec.validate();
    Rng rng(spec.seed);

    std::vector<std::uint32_t> size_rank(spec.n_hosts);
    for (std::uint32_t h = 0; h < spec.n_hosts; ++h)
        size_rank[h] = h;
    shuffle(std::span(size_rank), rng);
    const ZipfSampler host_pick(spec.n_hosts, spec.host_size_skew);
    std::vector<std::uint32_t> host_size(spec.n_hosts, 1);
    for (std::uint32_t i = spec.n_hosts; i < spec.n_docs; ++i)
        ++host_size[size_rank[host_pick(rng)]];

    const ZipfSampler global_words(spec.vocab_global, spec.zipf_exponent);
    const ZipfSampler host_words(spec.vocab_per_host, spec.zipf_exponent);

    std::vector<Page> pages;
    pages.reserve(spec.n_docs);
    for (std::uint32_t host = 0; host < spec.n_hosts; ++host) {
        const std::vector<std::string>* previous = nullptr;
        for (std::uint32_t seq = 0; seq < host_size[host]; ++seq) {
            Page page{host, seq, {}};
            auto length = static_cast<std::uint32_t>(
                std::lround(spec.doc_len_mean * (0.5 + unit_real(rng))));
            length = std::max<std::uint32_t>(length, 1);

            if (previous != nullptr && unit_real(rng) < spec.drift) {
                for (const auto& token : *previous) {
                    if (page.tokens.size() < length && unit_real(rng) < reuse_probability)
                        page.tokens.push_back(token);
                }
            }
            while (page.tokens.size() < length) {
                if (unit_real(rng) < spec.host_locality)
                    page.tokens.push_back(fmt::format("h{}w{}", host, host_words(rng)));
                else
                    page.tokens.push_back(fmt::format("g{}", global_words(rng)));
            }
            pages.push_back(std::move(page));
            previous = &pages.back().tokens;
        }
    }

    std::vector<std::uint32_t> crawl_order(pages.size());
    for (std::uint32_t i = 0; i < crawl_order.size(); ++i)
        crawl_order[i] = i;
    shuffle(std::span(crawl_order), rng);

    CorpusBuilder builder;
    for (auto index : crawl_order) {
        const auto& page = pages[index];
        builder.add(fmt::format("host{:06}.gov/p{:06}", page.host, page.seq), page.tokens);
    }
    return std::move(builder).build();
}

} // namespace shardlab
