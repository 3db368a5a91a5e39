#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shardlab {

using TermId = std::uint32_t;
// Position of a document in its corpus; stable across all partitionings.
using DocKey = std::uint32_t;
// Local 1-based document identifier inside one index.
using DocId = std::uint32_t;
using ShardId = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace shardlab
