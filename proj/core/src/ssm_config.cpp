#include <json.hpp>

#include "sfcscan/error.hpp"
#include "sfcscan/io.hpp"
#include "sfcscan/ssm.hpp"

namespace sfcscan {

namespace {

using nlohmann::json;

Eigen::VectorXd to_vector(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw FormatError(std::string("SSM config: '") + key + "' must be an array");
    }
    const auto& a = j.at(key);
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

Eigen::MatrixXd to_matrix(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
    if (!j.contains(key) || !j.at(key).is_array() ||
        j.at(key).size() != static_cast<std::size_t>(rows)) {
        throw FormatError(std::string("SSM config: '") + key + "' must have " +
                          std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j.at(key)[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
            throw FormatError(std::string("SSM config: '") + key + "' rows must have " +
                              std::to_string(cols) + " entries");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

json from_vector(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json from_matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

SsmConfig parse_ssm_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("SSM config: ") + e.what());
    }
    try {
        SsmConfig cfg;
        const auto m = j.at("m").get<Eigen::Index>();
        if (m < 1) throw FormatError("SSM config: m must be >= 1");
        if (j.contains("A")) {
            cfg.base.A = to_matrix(j, "A", m, m);
        } else {
            const auto a = to_vector(j, "A_diag");
            if (a.size() != m) throw FormatError("SSM config: A_diag must have m entries");
            cfg.base.A = a.asDiagonal().toDenseMatrix();
        }
        cfg.base.B = to_vector(j, "B");
        cfg.base.C = to_vector(j, "C").transpose();
        cfg.base.D = j.value("D", 0.0);
        cfg.delta = j.value("delta", kDefaultDelta);
        cfg.base.validate();
        if (!(cfg.delta > 0.0)) throw FormatError("SSM config: delta must be positive");

        if (j.contains("selective")) {
            const auto& s = j.at("selective");
            const auto d = s.value("input_dim", Eigen::Index{1});
            if (d < 1) throw FormatError("SSM config: input_dim must be >= 1");
            SelectiveParams& p = cfg.selective;
            p.W_B = to_matrix(s, "W_B", m, d);
            p.b_B = to_vector(s, "b_B");
            p.W_C = to_matrix(s, "W_C", m, d);
            p.b_C = to_vector(s, "b_C");
            p.w_delta = to_vector(s, "w_delta");
            p.P = s.at("P").get<double>();
            p.channel = s.value("channel", Eigen::Index{0});
            p.validate(m);
        } else {
            cfg.selective = SelectiveParams::constant(cfg.base, cfg.delta);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw FormatError(std::string("SSM config: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("SSM config: ") + e.what());
    }
}

std::string dump_ssm_config(const SsmConfig& cfg) {
    json j;
    j["m"] = cfg.base.dim();
    bool diag = true;
    for (Eigen::Index r = 0; r < cfg.base.A.rows(); ++r) {
        for (Eigen::Index c = 0; c < cfg.base.A.cols(); ++c) {
            if (r != c && cfg.base.A(r, c) != 0.0) diag = false;
        }
    }
    if (diag) {
        j["A_diag"] = from_vector(cfg.base.A.diagonal());
    } else {
        j["A"] = from_matrix(cfg.base.A);
    }
    j["B"] = from_vector(cfg.base.B);
    j["C"] = from_vector(cfg.base.C.transpose());
    j["D"] = cfg.base.D;
    j["delta"] = cfg.delta;
    const auto& p = cfg.selective;
    j["selective"] = {{"input_dim", p.input_dim()}, {"W_B", from_matrix(p.W_B)},
                      {"b_B", from_vector(p.b_B)},  {"W_C", from_matrix(p.W_C)},
                      {"b_C", from_vector(p.b_C)},  {"w_delta", from_vector(p.w_delta)},
                      {"P", p.P},                   {"channel", p.channel}};
    return j.dump(2) + "\n";
}

SsmConfig load_ssm_config(const std::string& path) { return parse_ssm_config(read_file(path)); }

}  // namespace sfcscan
