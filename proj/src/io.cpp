#include "fgm/io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fgm::io {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << std::setprecision(17);
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    return is;
}

std::filesystem::path sidecar(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p += ".json";
    return p;
}

json layout_to_json(const BlockLayout& layout) {
    return json{{"truncations", layout.truncations}};
}

BlockLayout layout_from_json(const json& j) {
    return BlockLayout(j.at("truncations").get<std::vector<int>>());
}

}  // namespace

void write_graph(const std::filesystem::path& path, const DecomposableGraph& g) {
    auto os = open_out(path);
    os << g.node_count() << "\n";
    for (const auto& e : g.edges()) os << (e.a + 1) << " " << (e.b + 1) << "\n";
}

DecomposableGraph read_graph(const std::filesystem::path& path) {
    auto is = open_in(path);
    int p = 0;
    if (!(is >> p)) throw IoError("graph file missing node count: " + path.string());
    std::vector<Edge> edges;
    int a, b;
    while (is >> a >> b) edges.emplace_back(a - 1, b - 1);
    return DecomposableGraph(p, edges);
}

void write_coefficients(const std::filesystem::path& csv_path,
                        const CoefficientDataset& data, const std::string& provenance) {
    auto os = open_out(csv_path);
    for (int i = 0; i < data.n(); ++i) {
        for (int k = 0; k < data.dim(); ++k)
            os << data.samples(i, k) << (k + 1 < data.dim() ? "," : "\n");
    }
    json j{{"layout", layout_to_json(data.layout)},
           {"c0", std::vector<double>(data.mean.data(), data.mean.data() + data.mean.size())},
           {"provenance", provenance}};
    open_out(sidecar(csv_path)) << j.dump(2) << "\n";
}

CoefficientDataset read_coefficients(const std::filesystem::path& csv_path) {
    json j;
    open_in(sidecar(csv_path)) >> j;
    BlockLayout layout = layout_from_json(j.at("layout"));
    const auto c0v = j.at("c0").get<std::vector<double>>();
    Eigen::VectorXd c0 = Eigen::Map<const Eigen::VectorXd>(c0v.data(), c0v.size());

    auto is = open_in(csv_path);
    std::vector<double> flat;
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) flat.push_back(std::stod(cell));
        ++rows;
    }
    if (rows == 0 || static_cast<int>(flat.size()) != rows * layout.total)
        throw IoError("coefficient CSV shape mismatch: " + csv_path.string());
    Eigen::MatrixXd samples(rows, layout.total);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < layout.total; ++k) samples(i, k) = flat[i * layout.total + k];
    return CoefficientDataset(std::move(samples), std::move(c0), std::move(layout));
}

void write_functional(const std::filesystem::path& path, const FunctionalDataset& data) {
    data.validate();
    auto os = open_out(path);
    os << "sample_id,node_id,t,value\n";
    for (int j = 0; j < data.node_count(); ++j)
        for (int i = 0; i < data.sample_count(); ++i)
            for (Eigen::Index t = 0; t < data.grids[j].size(); ++t)
                os << (i + 1) << "," << (j + 1) << "," << data.grids[j](t) << ","
                   << data.values[j](i, t) << "\n";
}

FunctionalDataset read_functional(const std::filesystem::path& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty functional CSV");
    std::map<int, std::map<int, std::vector<std::pair<double, double>>>> rows;  // node -> sample
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw IoError("bad functional CSV row: " + line);
        rows[std::stoi(cells[1])][std::stoi(cells[0])].emplace_back(std::stod(cells[2]),
                                                                    std::stod(cells[3]));
    }
    FunctionalDataset data;
    for (auto& [node, samples] : rows) {
        const auto& first = samples.begin()->second;
        Eigen::VectorXd grid(first.size());
        for (std::size_t t = 0; t < first.size(); ++t) grid(t) = first[t].first;
        Eigen::MatrixXd vals(samples.size(), first.size());
        int i = 0;
        for (auto& [sid, curve] : samples) {
            if (curve.size() != first.size()) throw IoError("ragged sample in functional CSV");
            for (std::size_t t = 0; t < curve.size(); ++t) vals(i, t) = curve[t].second;
            ++i;
        }
        data.grids.push_back(std::move(grid));
        data.values.push_back(std::move(vals));
    }
    data.validate();
    return data;
}

void write_matrix_plain(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    auto os = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << m(i, j) << (j + 1 < m.cols() ? "," : "\n");
}

void write_matrix(const std::filesystem::path& csv_path, const Eigen::MatrixXd& m,
                  const BlockLayout& layout) {
    write_matrix_plain(csv_path, m);
    open_out(sidecar(csv_path)) << json{{"layout", layout_to_json(layout)}}.dump(2) << "\n";
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& csv_path) {
    auto is = open_in(csv_path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        rows.emplace_back();
        while (std::getline(ss, cell, ',')) rows.back().push_back(std::stod(cell));
    }
    if (rows.empty()) throw IoError("empty matrix CSV: " + csv_path.string());
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw IoError("ragged matrix CSV");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

void write_trace(const std::filesystem::path& path, const ChainTrace& trace) {
    auto os = open_out(path);
    os << json{{"p", trace.p}, {"seed", trace.seed}, {"sweeps", trace.size()}}.dump() << "\n";
    for (int s = 0; s < trace.size(); ++s) {
        json edges = json::array();
        for (const auto& e : trace.graphs[s]) edges.push_back({e.a + 1, e.b + 1});
        os << json{{"sweep", s},
                   {"edges", edges},
                   {"log_post", trace.log_posts[s]},
                   {"accepted", trace.accepts[s] != 0}}
                  .dump()
           << "\n";
    }
}

ChainTrace read_trace(const std::filesystem::path& path) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty trace file: " + path.string());
    const json header = json::parse(line);
    ChainTrace trace;
    trace.p = header.at("p").get<int>();
    trace.seed = header.at("seed").get<std::uint64_t>();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        std::vector<Edge> edges;
        for (const auto& e : rec.at("edges"))
            edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        trace.graphs.push_back(std::move(edges));
        trace.log_posts.push_back(rec.at("log_post").get<double>());
        trace.accepts.push_back(rec.at("accepted").get<bool>() ? 1 : 0);
    }
    return trace;
}

void write_metadata(const std::filesystem::path& path, const NodeMetadata& meta) {
    auto os = open_out(path);
    os << "node_id,region,mirror_id\n";
    for (std::size_t v = 0; v < meta.region.size(); ++v) {
        os << (v + 1) << "," << meta.region[v] << ",";
        if (!meta.mirror.empty() && meta.mirror[v] >= 0) os << (meta.mirror[v] + 1);
        os << "\n";
    }
}

NodeMetadata read_metadata(const std::filesystem::path& path, int p) {
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty metadata CSV");
    NodeMetadata meta;
    meta.region.assign(p, "");
    meta.mirror.assign(p, -1);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, region, mirror;
        std::getline(ss, id, ',');
        std::getline(ss, region, ',');
        std::getline(ss, mirror, ',');
        const int v = std::stoi(id) - 1;
        if (v < 0 || v >= p) throw MissingMetadataError("metadata node id out of range");
        meta.region[v] = region;
        if (!mirror.empty()) meta.mirror[v] = std::stoi(mirror) - 1;
    }
    for (const auto& r : meta.region)
        if (r.empty()) throw MissingMetadataError("metadata misses a node");
    meta.validate(p);
    return meta;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    open_out(path) << text;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const std::string& config_json, std::uint64_t seed,
                    double wall_seconds) {
    json j{{"command", command},
           {"config", json::parse(config_json)},
           {"seed", seed},
           {"wall_seconds", wall_seconds},
           {"artifact_version", "0.1.0"}};
    open_out(dir / "manifest.json") << j.dump(2) << "\n";
}

namespace {

SimSpec simspec_from_json(const json& j) {
    SimSpec spec;
    for (const auto& [key, val] : j.items()) {
        if (key == "p") spec.p = val.get<int>();
        else if (key == "n") spec.n = val.get<int>();
        else if (key == "grid_points") spec.grid_points = val.get<int>();
        else if (key == "truncation_min") spec.truncation_min = val.get<int>();
        else if (key == "truncation_max") spec.truncation_max = val.get<int>();
        else if (key == "truncations") spec.truncations = val.get<std::vector<int>>();
        else if (key == "gamma_shape") spec.gamma_shape = val.get<double>();
        else if (key == "gamma_scale") spec.gamma_scale = val.get<double>();
        else if (key == "decay_rate") spec.decay_rate = val.get<double>();
        else if (key == "mean_offset") spec.mean_offset = val.get<double>();
        else if (key == "mean_amplitude") spec.mean_amplitude = val.get<double>();
        else if (key == "edge_weight_min") spec.edge_weight_min = val.get<double>();
        else if (key == "edge_weight_max") spec.edge_weight_max = val.get<double>();
        else if (key == "seed") spec.seed = val.get<std::uint64_t>();
        else if (key == "true_edges") {
            for (const auto& e : val)
                spec.true_edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
        } else {
            throw IoError("unknown sim spec key: " + key);
        }
    }
    return spec;
}

}  // namespace

SimSpec read_simspec(const std::filesystem::path& path) {
    auto is = open_in(path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return simspec_from_json(json::parse(text));

    // flat `key = value` form; true_edges as "a-b;c-d" pairs (1-based)
    json j = json::object();
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "true_edges") {
            json edges = json::array();
            std::stringstream es(val);
            std::string pair;
            while (std::getline(es, pair, ';')) {
                const auto dash = pair.find('-');
                if (dash == std::string::npos) throw IoError("bad edge pair: " + pair);
                edges.push_back({std::stoi(pair.substr(0, dash)),
                                 std::stoi(pair.substr(dash + 1))});
            }
            j[key] = edges;
        } else if (key == "truncations") {
            json t = json::array();
            std::stringstream ts(val);
            std::string item;
            while (std::getline(ts, item, ';')) t.push_back(std::stoi(item));
            j[key] = t;
        } else if (val.find('.') != std::string::npos || val.find('e') != std::string::npos) {
            j[key] = std::stod(val);
        } else {
            j[key] = std::stoll(val);
        }
    }
    return simspec_from_json(j);
}

std::string simspec_to_json(const SimSpec& spec) {
    json edges = json::array();
    for (const auto& e : spec.true_edges) edges.push_back({e.a + 1, e.b + 1});
    json j{{"p", spec.p},
           {"n", spec.n},
           {"grid_points", spec.grid_points},
           {"truncation_min", spec.truncation_min},
           {"truncation_max", spec.truncation_max},
           {"gamma_shape", spec.gamma_shape},
           {"gamma_scale", spec.gamma_scale},
           {"decay_rate", spec.decay_rate},
           {"mean_offset", spec.mean_offset},
           {"mean_amplitude", spec.mean_amplitude},
           {"edge_weight_min", spec.edge_weight_min},
           {"edge_weight_max", spec.edge_weight_max},
           {"seed", spec.seed},
           {"true_edges", edges}};
    if (!spec.truncations.empty()) j["truncations"] = spec.truncations;
    return j.dump(2);
}

}  // namespace fgm::io
