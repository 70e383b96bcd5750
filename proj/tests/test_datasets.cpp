#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "idkit/datasets.hpp"
#include "idkit/errors.hpp"
#include "support/oracles.hpp"

using namespace idkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("idkit-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

} // namespace

TEST_CASE("boolean generator produces a fair coin") {
    const Matrix m = generate(GeneratorKind::boolean, 784, 1000, 42);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double v = m(i, j);
            CHECK((v == 0.0 || v == 1.0));
            sum += v;
        }
    const double mean = sum / (784.0 * 1000.0);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::fabs(mean - 0.5) <= 0.05);
}

TEST_CASE("gaussian generator has standard moments") {
    const Matrix m = generate(GeneratorKind::gaussian, 784, 1000, 7);
    const double count = 784.0 * 1000.0;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) {
            sum += m(i, j);
            sumsq += m(i, j) * m(i, j);
        }
    const double mean = sum / count;
    const double variance = sumsq / count - mean * mean;
    CHECK(std::fabs(mean) <= 0.01);
    CHECK(std::fabs(variance - 1.0) <= 0.02);
}

TEST_CASE("uniform generator stays inside the half-open interval") {
    const Matrix m = generate(GeneratorKind::uniform, 784, 1000, 9);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) {
            CHECK(m(i, j) >= 0.0);
            CHECK(m(i, j) < 1.0);
            sum += m(i, j);
        }
    CHECK(std::fabs(sum / (784.0 * 1000.0) - 0.5) <= 0.005);
}

TEST_CASE("equal seed means equal bits") {
    for (GeneratorKind kind :
         {GeneratorKind::boolean, GeneratorKind::gaussian, GeneratorKind::uniform}) {
        const Matrix a = generate(kind, 17, 23, 1234);
        const Matrix b = generate(kind, 17, 23, 1234);
        CHECK(a == b);
        const Matrix c = generate(kind, 17, 23, 1235);
        CHECK_FALSE(a == c);
    }
}

TEST_CASE("minimal coordinate file densifies with zero fill") {
    TempDir tmp;
    const fs::path file = tmp.path / "single.mtx";
    oracles::write_text(file, "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 1\n"
                              "1 1 3.5\n");
    const Matrix m = load_matrix_market(file);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(0, 0) == 3.5);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 0) == 0.0);
    CHECK(m(1, 1) == 0.0);
}

TEST_CASE("symmetric files mirror across the diagonal") {
    TempDir tmp;
    const fs::path file = tmp.path / "sym.mtx";
    oracles::write_text(file, "%%MatrixMarket matrix coordinate real symmetric\n"
                              "% a comment line\n"
                              "3 3 3\n"
                              "1 1 2.0\n"
                              "3 1 -1.5\n"
                              "3 3 4.0\n");
    MatrixMarketInfo info;
    const Matrix m = load_matrix_market(file, &info);
    CHECK(m(2, 0) == -1.5);
    CHECK(m(0, 2) == -1.5);
    CHECK(m(0, 0) == 2.0);
    CHECK(info.symmetric);
    CHECK(info.stored_entries == 3);
    CHECK(info.expanded_nonzeros == 4); // diagonal entries count once
}

TEST_CASE("malformed matrix market input names the line") {
    TempDir tmp;
    const auto expect_parse_error = [&](const std::string& body, const std::string& needle) {
        const fs::path file = tmp.path / "bad.mtx";
        oracles::write_text(file, body);
        try {
            load_matrix_market(file);
            FAIL_CHECK("expected ParseError for: " << needle);
        } catch (const ParseError& e) {
            const std::string what = e.what();
            CHECK(what.find("line") != std::string::npos);
            CHECK(what.find(needle) != std::string::npos);
        }
    };
    expect_parse_error("%%NotMatrixMarket matrix coordinate real general\n2 2 0\n", "banner");
    expect_parse_error("%%MatrixMarket matrix coordinate complex general\n2 2 0\n", "complex");
    expect_parse_error("%%MatrixMarket matrix array real general\n2 2\n", "array");
    expect_parse_error(
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n", "out of range");
    expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n",
                       "expected 2 entries");
}

TEST_CASE("missing matrix market file raises FileNotFoundError") {
    CHECK_THROWS_AS(load_matrix_market("/nonexistent/nowhere.mtx"), FileNotFoundError);
}

TEST_CASE("idx loader flattens one image per column") {
    TempDir tmp;
    const fs::path file = tmp.path / "zero.idx3";
    oracles::write_idx3(file, {std::vector<unsigned char>(784, 0)}, 28, 28);
    const Matrix m = load_idx_images(file, 1);
    REQUIRE(m.rows() == 784);
    REQUIRE(m.cols() == 1);
    CHECK(frobenius_norm(m) == 0.0);
}

TEST_CASE("idx loader preserves the row-major byte ramp") {
    TempDir tmp;
    const fs::path file = tmp.path / "ramp.idx3";
    std::vector<unsigned char> ramp(256);
    for (std::size_t i = 0; i < 256; ++i) ramp[i] = static_cast<unsigned char>(i);
    oracles::write_idx3(file, {ramp}, 16, 16);
    const Matrix m = load_idx_images(file, 1);
    REQUIRE(m.rows() == 256);
    for (std::size_t i = 0; i < 256; ++i) CHECK(m(i, 0) == static_cast<double>(i));
}

TEST_CASE("idx loader rejects bad magic and over-requests") {
    TempDir tmp;
    const fs::path bad_magic = tmp.path / "bad.idx3";
    oracles::write_idx3(bad_magic, {std::vector<unsigned char>(4, 1)}, 2, 2, 0x00000801u);
    CHECK_THROWS_AS(load_idx_images(bad_magic, 1), FormatError);

    const fs::path short_file = tmp.path / "short.idx3";
    std::vector<std::vector<unsigned char>> three(3, std::vector<unsigned char>(4, 7));
    oracles::write_idx3(short_file, three, 2, 2);
    try {
        load_idx_images(short_file, 5);
        FAIL_CHECK("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK(load_idx_images(short_file, 3).cols() == 3);
}

TEST_CASE("resolve dispatches and is deterministic") {
    const DatasetSpec gen{"g", GeneratorSource{GeneratorKind::gaussian, 4, 4, 7}};
    CHECK(resolve(gen) == resolve(gen));

    const DatasetSpec missing{"m", MatrixMarketSource{"/nonexistent/nowhere.mtx"}};
    CHECK_THROWS_AS(resolve(missing), FileNotFoundError);

    TempDir tmp;
    const fs::path file = tmp.path / "tiny.mtx";
    oracles::write_text(file, "%%MatrixMarket matrix coordinate real general\n1 2 1\n1 2 9.0\n");
    const DatasetSpec mm{"t", MatrixMarketSource{file}};
    const Matrix m = resolve(mm);
    CHECK(m(0, 1) == 9.0);

    std::vector<std::vector<unsigned char>> images(3, std::vector<unsigned char>(4, 7));
    const fs::path idx = tmp.path / "tiny.idx3";
    oracles::write_idx3(idx, images, 2, 2);
    const DatasetSpec over{"i", IdxImagesSource{idx, 5}};
    CHECK_THROWS_AS(resolve(over), FormatError);
    const DatasetSpec ok{"i", IdxImagesSource{idx, 2}};
    CHECK(resolve(ok).cols() == 2);
}

TEST_CASE("suitesparse files match their published shapes and entry counts") {
    // Runs only when the real files are present under ID_DATA_DIR.
    const char* env = std::getenv("ID_DATA_DIR");
    const fs::path dir = env ? fs::path(env) : fs::path("data");
    struct Expected {
        const char* file;
        std::size_t dim;
        std::size_t stored;
    };
    for (const Expected& e : {Expected{"1138_bus.mtx", 1138, 4054},
                              Expected{"Vehicle_10NN.mtx", 846, 10894},
                              Expected{"Spectro_NN.mtx", 531, 7422}}) {
        const fs::path file = dir / e.file;
        if (!fs::exists(file)) {
            MESSAGE("skipping ", e.file, " (not present under ", dir.string(), ")");
            continue;
        }
        MatrixMarketInfo info;
        const Matrix m = load_matrix_market(file, &info);
        CHECK(m.rows() == e.dim);
        CHECK(m.cols() == e.dim);
        CHECK(info.stored_entries == e.stored);
        CHECK(m.all_finite());
    }
}

TEST_CASE("loaders only ever produce finite entries") {
    const Matrix g = generate(GeneratorKind::gaussian, 50, 40, 3);
    CHECK(g.all_finite());
    TempDir tmp;
    const fs::path file = tmp.path / "inf.mtx";
    oracles::write_text(file, "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 inf\n");
    CHECK_THROWS_AS(load_matrix_market(file), ParseError);
}
