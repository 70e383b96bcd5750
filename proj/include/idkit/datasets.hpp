#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "idkit/matrix.hpp"

namespace idkit {

enum class GeneratorKind { boolean, gaussian, uniform };

struct GeneratorSource {
    GeneratorKind kind = GeneratorKind::gaussian;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 0;
};

struct MatrixMarketSource {
    std::filesystem::path path;
};

struct IdxImagesSource {
    std::filesystem::path path;
    std::size_t max_images = 0;
};

/// Named source descriptor resolving to a Matrix.
struct DatasetSpec {
    std::string name;
    std::variant<GeneratorSource, MatrixMarketSource, IdxImagesSource> source;
};

/// i.i.d. random matrix: boolean entries from {0,1}, gaussian from N(0,1),
/// uniform from [0,1). A fixed seed yields a bit-identical matrix.
Matrix generate(GeneratorKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed);

struct MatrixMarketInfo {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t stored_entries = 0;    // triplets in the file
    std::size_t expanded_nonzeros = 0; // after symmetric mirroring
    bool symmetric = false;
};

/// Dense matrix from a Matrix Market coordinate file with real entries.
/// Symmetric-tagged files are mirrored across the diagonal; indices are
/// converted from 1-based. Malformed input raises ParseError naming the
/// line; a missing file raises FileNotFoundError.
Matrix load_matrix_market(const std::filesystem::path& path, MatrixMarketInfo* info = nullptr);

/// Dense matrix from an IDX3 unsigned-byte image file: one flattened image
/// per column, pixel bytes widened to doubles in [0, 255]. Raises
/// FormatError on a bad magic number, truncated payload, or when the file
/// holds fewer than max_images images (the message names the count).
Matrix load_idx_images(const std::filesystem::path& path, std::size_t max_images);

/// Dispatch to the loader selected by the spec's source.
Matrix resolve(const DatasetSpec& spec);

} // namespace idkit
