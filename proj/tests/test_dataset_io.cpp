#include <doctest.h>

#include "gacl/dataset.hpp"
#include "gacl/rng.hpp"
#include "gacl/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace gacl;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gacl_io_test_" + std::to_string(Rng(::time(nullptr)).raw()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

void write_minimal(const fs::path& dir) {
    write_file(dir / "graph.txt", "2 1\n0 1\n");
    write_file(dir / "features.txt", "1.0 0.0\n0.0 1.0\n");
    write_file(dir / "labels.txt", "0\n1\n");
    write_file(dir / "splits.json", R"({"train":[0],"val":[1],"test":[]})");
}

} // namespace

TEST_CASE("minimal two-node fixture round-trips through the loader") {
    TempDir tmp;
    write_file(tmp.path / "graph.txt", "2 1\n0 1\n");
    write_file(tmp.path / "features.txt", "1.0 0.0\n0.0 1.0\n");
    write_file(tmp.path / "labels.txt", "0\n1\n");
    write_file(tmp.path / "splits.json", R"({"train":[0],"val":[1],"test":[]})");

    const Dataset data = load_dataset(tmp.path);
    CHECK(data.graph.num_nodes == 2);
    CHECK(data.graph.row_offsets == std::vector<Index>{0, 1, 2});
    CHECK(data.graph.col_indices == std::vector<Index>{1, 0});
    CHECK(data.features.at(0, 0) == 1.0);
    CHECK(data.features.at(1, 1) == 1.0);
    CHECK(data.graph.labels == std::vector<int>{0, 1});
    CHECK(data.splits.train == std::vector<Index>{0});
}

TEST_CASE("duplicate and reverse edges are merged on load") {
    TempDir tmp;
    write_minimal(tmp.path);
    write_file(tmp.path / "graph.txt", "2 3\n0 1\n1 0\n0 1\n");
    const Dataset data = load_dataset(tmp.path);
    CHECK(data.graph.num_edges() == 1);
}

TEST_CASE("feature row count mismatch names both counts") {
    TempDir tmp;
    write_minimal(tmp.path);
    write_file(tmp.path / "features.txt", "1.0 0.0\n");
    try {
        load_dataset(tmp.path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find("1 feature rows") != std::string::npos);
        CHECK(what.find("2 nodes") != std::string::npos);
    }
}

TEST_CASE("malformed lines are reported with their line number") {
    TempDir tmp;
    write_minimal(tmp.path);
    SUBCASE("bad edge") {
        write_file(tmp.path / "graph.txt", "2 1\nnot an edge\n");
        try {
            load_dataset(tmp.path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("bad feature value") {
        write_file(tmp.path / "features.txt", "1.0 0.0\n0.0 x\n");
        try {
            load_dataset(tmp.path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("negative label") {
        write_file(tmp.path / "labels.txt", "0\n-2\n");
        CHECK_THROWS_AS(load_dataset(tmp.path), DataError);
    }
}

TEST_CASE("out-of-range ids are rejected") {
    TempDir tmp;
    write_minimal(tmp.path);
    SUBCASE("edge id") {
        write_file(tmp.path / "graph.txt", "2 1\n0 7\n");
        CHECK_THROWS_AS(load_dataset(tmp.path), DataError);
    }
    SUBCASE("split index") {
        write_file(tmp.path / "splits.json", R"({"train":[0],"val":[9],"test":[]})");
        CHECK_THROWS_AS(load_dataset(tmp.path), DataError);
    }
    SUBCASE("overlapping splits") {
        write_file(tmp.path / "splits.json", R"({"train":[0,1],"val":[1],"test":[]})");
        CHECK_THROWS_AS(load_dataset(tmp.path), DataError);
    }
    SUBCASE("missing split key") {
        write_file(tmp.path / "splits.json", R"({"train":[0],"val":[1]})");
        CHECK_THROWS_AS(load_dataset(tmp.path), DataError);
    }
}

TEST_CASE("save_dataset then load_dataset reproduces the synthetic graph") {
    TempDir tmp;
    SyntheticSpec spec;
    spec.kind = SyntheticKind::heterophilic_bipartite_monophily;
    spec.num_nodes = 48;
    spec.num_classes = 3;
    spec.p_out = 0.7;
    spec.feature_dim = 5;
    SyntheticData synth = generate_synthetic(spec, 17);

    Dataset ds;
    ds.graph = std::move(synth.graph);
    ds.features = std::move(synth.features);
    ds.splits = make_stratified_splits(ds.graph.labels, 0.2, 0.2, 3);
    save_dataset(ds, tmp.path / "out");
    const Dataset loaded = load_dataset(tmp.path / "out");

    CHECK(loaded.graph.col_indices == ds.graph.col_indices);
    CHECK(loaded.graph.row_offsets == ds.graph.row_offsets);
    CHECK(loaded.graph.labels == ds.graph.labels);
    CHECK(loaded.splits.train == ds.splits.train);
    CHECK(loaded.splits.test == ds.splits.test);
    REQUIRE(loaded.features.data.size() == ds.features.data.size());
    for (size_t i = 0; i < ds.features.data.size(); ++i) {
        CHECK(loaded.features.data[i] == ds.features.data[i]);  // %.17g survives the round trip
    }
}

TEST_CASE("embeddings file round-trips through float32") {
    TempDir tmp;
    Rng rng(23);
    DenseMatrix emb(7, 5);
    for (double& x : emb.data) x = rng.normal();
    const auto path = tmp.path / "embeddings.bin";
    write_embeddings(path, emb);

    // header: magic, version, N, D then N*D little-endian f32
    CHECK(fs::file_size(path) == 4 + 4 + 4 + 4 + 7 * 5 * 4);
    const DenseMatrix back = read_embeddings(path);
    REQUIRE(back.rows == 7);
    REQUIRE(back.cols == 5);
    for (size_t i = 0; i < emb.data.size(); ++i) {
        CHECK(back.data[i] == doctest::Approx(emb.data[i]).epsilon(1e-6));
        CHECK(back.data[i] == static_cast<double>(static_cast<float>(emb.data[i])));
    }
}

TEST_CASE("embeddings reader rejects bad magic") {
    TempDir tmp;
    write_file(tmp.path / "bad.bin", "NOPE....");
    CHECK_THROWS_AS(read_embeddings(tmp.path / "bad.bin"), DataError);
    CHECK_THROWS_AS(read_embeddings(tmp.path / "missing.bin"), DataError);
}
