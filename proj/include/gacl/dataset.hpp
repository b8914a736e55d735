#pragma once

#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"
#include "gacl/metrics.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace gacl {

/// Raised for malformed or inconsistent input files; message names the file
/// and, where it applies, the offending line.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Dataset {
    Graph graph;
    DenseMatrix features;
    Splits splits;
    std::string name;
};

// Directory layout:
//   graph.txt    first line "N M", then M lines "u v" (0-indexed)
//   features.txt N lines of D whitespace-separated decimals
//   labels.txt   N lines, one non-negative integer each
//   splits.json  {"train":[...],"val":[...],"test":[...]}
Dataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const Dataset& data, const std::filesystem::path& dir);

// embeddings.bin: magic "GACL", u32 version=1, u32 N, u32 D, then N·D
// little-endian f32 row-major.
void write_embeddings(const std::filesystem::path& path, const DenseMatrix& embeddings);
DenseMatrix read_embeddings(const std::filesystem::path& path);

} // namespace gacl
