#include "idkit/datasets.hpp"

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "idkit/errors.hpp"
#include "idkit/random.hpp"

namespace idkit {

Matrix generate(GeneratorKind kind, std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("generate: dimensions must be positive");
    Matrix m(rows, cols);
    RandomEngine rng = seeded_engine(seed);
    double* out = m.data();
    const std::size_t total = rows * cols;
    switch (kind) {
    case GeneratorKind::boolean:
        for (std::size_t i = 0; i < total; ++i) out[i] = static_cast<double>(rng() >> 63);
        break;
    case GeneratorKind::gaussian:
        for (std::size_t i = 0; i < total; ++i) out[i] = next_normal(rng);
        break;
    case GeneratorKind::uniform:
        for (std::size_t i = 0; i < total; ++i) out[i] = next_uniform(rng);
        break;
    }
    return m;
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
    throw ParseError(path.string() + ": line " + std::to_string(line) + ": " + what);
}

bool read_data_line(std::istream& in, std::string& out, std::size_t& line) {
    // Next non-comment, non-blank line.
    while (std::getline(in, out)) {
        ++line;
        std::size_t i = out.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (out[i] == '%') continue;
        return true;
    }
    return false;
}

} // namespace

Matrix load_matrix_market(const std::filesystem::path& path, MatrixMarketInfo* info) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("load_matrix_market: cannot open " + path.string());

    std::size_t line = 0;
    std::string header;
    if (!std::getline(in, header)) parse_fail(path, 1, "empty file");
    ++line;

    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") parse_fail(path, line, "missing %%MatrixMarket banner");
    if (object != "matrix") parse_fail(path, line, "unsupported object '" + object + "'");
    if (format != "coordinate") parse_fail(path, line, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer")
        parse_fail(path, line, "unsupported field '" + field + "' (real entries required)");
    bool symmetric = false;
    if (symmetry == "symmetric")
        symmetric = true;
    else if (symmetry != "general")
        parse_fail(path, line, "unsupported symmetry '" + symmetry + "'");

    std::string text;
    if (!read_data_line(in, text, line)) parse_fail(path, line + 1, "missing size line");
    std::istringstream ss(text);
    long long rows = 0, cols = 0, nnz = 0;
    if (!(ss >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
        parse_fail(path, line, "malformed size line '" + text + "'");

    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::size_t expanded = 0;
    for (long long t = 0; t < nnz; ++t) {
        if (!read_data_line(in, text, line))
            parse_fail(path, line + 1, "expected " + std::to_string(nnz) + " entries, got " +
                                           std::to_string(t));
        std::istringstream es(text);
        long long i = 0, j = 0;
        double value = 0.0;
        if (!(es >> i >> j >> value)) parse_fail(path, line, "malformed entry '" + text + "'");
        if (i < 1 || i > rows || j < 1 || j > cols)
            parse_fail(path, line, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                       ") out of range");
        if (!std::isfinite(value)) parse_fail(path, line, "non-finite value");
        const std::size_t r = static_cast<std::size_t>(i - 1);
        const std::size_t c = static_cast<std::size_t>(j - 1);
        m(r, c) = value;
        ++expanded;
        if (symmetric && r != c) {
            m(c, r) = value;
            ++expanded;
        }
    }

    if (info) {
        info->rows = static_cast<std::size_t>(rows);
        info->cols = static_cast<std::size_t>(cols);
        info->stored_entries = static_cast<std::size_t>(nnz);
        info->expanded_nonzeros = expanded;
        info->symmetric = symmetric;
    }
    return m;
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError("load_idx_images: " + path.string() + ": truncated " + what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

} // namespace

Matrix load_idx_images(const std::filesystem::path& path, std::size_t max_images) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError("load_idx_images: cannot open " + path.string());

    const std::uint32_t magic = read_be32(in, path, "magic");
    if (magic != 0x00000803u) {
        std::ostringstream os;
        os << "load_idx_images: " << path.string() << ": bad magic 0x" << std::hex << magic
           << " (want 0x803)";
        throw FormatError(os.str());
    }
    const std::uint32_t count = read_be32(in, path, "image count");
    const std::uint32_t height = read_be32(in, path, "row count");
    const std::uint32_t width = read_be32(in, path, "column count");
    if (max_images < 1) throw std::invalid_argument("load_idx_images: max_images must be positive");
    if (max_images > count)
        throw FormatError("load_idx_images: " + path.string() + ": requested " +
                          std::to_string(max_images) + " images but file holds only " +
                          std::to_string(count));

    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    Matrix m(pixels, max_images);
    std::vector<unsigned char> buf(pixels);
    for (std::size_t img = 0; img < max_images; ++img) {
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels)))
            throw FormatError("load_idx_images: " + path.string() + ": truncated at image " +
                              std::to_string(img));
        double* col = m.col_data(img);
        for (std::size_t p = 0; p < pixels; ++p) col[p] = static_cast<double>(buf[p]);
    }
    return m;
}

Matrix resolve(const DatasetSpec& spec) {
    return std::visit(
        [](const auto& src) -> Matrix {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, GeneratorSource>) {
                return generate(src.kind, src.rows, src.cols, src.seed);
            } else if constexpr (std::is_same_v<T, MatrixMarketSource>) {
                return load_matrix_market(src.path);
            } else {
                return load_idx_images(src.path, src.max_images);
            }
        },
        spec.source);
}

} // namespace idkit
