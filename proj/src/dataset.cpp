#include "gacl/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace gacl {

namespace {

using nlohmann::json;

std::ifstream open_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, size_t line, const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

Graph load_graph(const std::filesystem::path& path, std::vector<int> labels) {
    std::ifstream in = open_text(path);
    std::string line;
    size_t lineno = 0;

    if (!std::getline(in, line)) fail_line(path, 1, "missing header line \"N M\"");
    ++lineno;
    std::istringstream header(line);
    long long n = -1, m = -1;
    if (!(header >> n >> m) || n < 0 || m < 0) fail_line(path, lineno, "malformed header, expected \"N M\"");

    EdgeList edges;
    edges.reserve(static_cast<size_t>(m));
    for (long long e = 0; e < m; ++e) {
        if (!std::getline(in, line)) fail_line(path, lineno + 1, "unexpected end of file, expected an edge");
        ++lineno;
        std::istringstream row(line);
        long long u = -1, v = -1;
        if (!(row >> u >> v) || u < 0 || v < 0) fail_line(path, lineno, "malformed edge, expected \"u v\"");
        if (u >= n || v >= n) fail_line(path, lineno, "node id out of range");
        edges.emplace_back(static_cast<Index>(u), static_cast<Index>(v));
    }
    if (!labels.empty() && labels.size() != static_cast<size_t>(n)) {
        throw DataError("labels.txt has " + std::to_string(labels.size()) + " entries for " +
                        std::to_string(n) + " nodes");
    }
    return build_graph(edges, static_cast<Index>(n), labels);
}

DenseMatrix load_features(const std::filesystem::path& path, Index num_nodes) {
    std::ifstream in = open_text(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    size_t lineno = 0;
    size_t dim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream row(line);
        std::vector<double> values;
        double x;
        while (row >> x) values.push_back(x);
        if (!row.eof()) fail_line(path, lineno, "non-numeric feature value");
        if (rows.empty()) {
            dim = values.size();
            if (dim == 0) fail_line(path, lineno, "empty feature row");
        } else if (values.size() != dim) {
            fail_line(path, lineno, "feature row has " + std::to_string(values.size()) +
                                        " values, expected " + std::to_string(dim));
        }
        rows.push_back(std::move(values));
    }
    if (rows.size() != num_nodes) {
        throw DataError(path.string() + ": " + std::to_string(rows.size()) +
                        " feature rows for " + std::to_string(num_nodes) + " nodes");
    }
    DenseMatrix x(num_nodes, static_cast<Index>(dim));
    for (Index i = 0; i < num_nodes; ++i) {
        std::copy(rows[i].begin(), rows[i].end(), x.row(i));
    }
    return x;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    std::ifstream in = open_text(path);
    std::vector<int> labels;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream row(line);
        long long y = -1;
        if (!(row >> y) || y < 0) fail_line(path, lineno, "expected a non-negative class id");
        labels.push_back(static_cast<int>(y));
    }
    if (labels.empty()) throw DataError(path.string() + ": no labels");
    return labels;
}

std::vector<Index> parse_split(const json& j, const std::string& key,
                               const std::filesystem::path& path, Index num_nodes) {
    if (!j.contains(key)) throw DataError(path.string() + ": missing key \"" + key + "\"");
    std::vector<Index> out;
    for (const auto& v : j.at(key)) {
        const long long idx = v.get<long long>();
        if (idx < 0 || idx >= static_cast<long long>(num_nodes)) {
            throw DataError(path.string() + ": split index " + std::to_string(idx) + " out of range");
        }
        out.push_back(static_cast<Index>(idx));
    }
    return out;
}

Splits load_splits(const std::filesystem::path& path, Index num_nodes) {
    std::ifstream in = open_text(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    Splits s;
    s.train = parse_split(j, "train", path, num_nodes);
    s.val = parse_split(j, "val", path, num_nodes);
    s.test = parse_split(j, "test", path, num_nodes);

    std::vector<char> seen(num_nodes, 0);
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        for (Index v : *part) {
            if (seen[v]) throw DataError(path.string() + ": node " + std::to_string(v) +
                                         " appears in more than one split");
            seen[v] = 1;
        }
    }
    return s;
}

} // namespace

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset data;
    data.name = dir.filename().string();
    std::vector<int> labels = load_labels(dir / "labels.txt");
    data.graph = load_graph(dir / "graph.txt", std::move(labels));
    data.features = load_features(dir / "features.txt", data.graph.num_nodes);
    data.splits = load_splits(dir / "splits.json", data.graph.num_nodes);
    return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "graph.txt");
        const EdgeList edges = undirected_edges(data.graph);
        out << data.graph.num_nodes << " " << edges.size() << "\n";
        for (const auto& [u, v] : edges) out << u << " " << v << "\n";
    }
    {
        std::ofstream out(dir / "features.txt");
        out.precision(17);
        for (Index i = 0; i < data.features.rows; ++i) {
            const double* row = data.features.row(i);
            for (Index j = 0; j < data.features.cols; ++j) {
                if (j) out << " ";
                out << row[j];
            }
            out << "\n";
        }
    }
    {
        std::ofstream out(dir / "labels.txt");
        for (int y : data.graph.labels) out << y << "\n";
    }
    {
        nlohmann::json j;
        j["train"] = data.splits.train;
        j["val"] = data.splits.val;
        j["test"] = data.splits.test;
        std::ofstream out(dir / "splits.json");
        out << j.dump() << "\n";
    }
}

void write_embeddings(const std::filesystem::path& path, const DenseMatrix& embeddings) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write("GACL", 4);
    const std::uint32_t version = 1, n = embeddings.rows, d = embeddings.cols;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    std::vector<float> row(d);
    for (Index i = 0; i < n; ++i) {
        const double* src = embeddings.row(i);
        for (Index j = 0; j < d; ++j) row[j] = static_cast<float>(src[j]);
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(d * 4));
    }
    if (!out) throw DataError("write failed for " + path.string());
}

DenseMatrix read_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "GACL") throw DataError(path.string() + ": bad magic");
    std::uint32_t version = 0, n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    if (!in || version != 1) throw DataError(path.string() + ": unsupported version");
    DenseMatrix emb(n, d);
    std::vector<float> row(d);
    for (Index i = 0; i < n; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(d * 4));
        if (!in) throw DataError(path.string() + ": truncated embedding data");
        double* dst = emb.row(i);
        for (Index j = 0; j < d; ++j) dst[j] = static_cast<double>(row[j]);
    }
    return emb;
}

} // namespace gacl
