#include "katolim/io.hpp"

#include <fstream>
#include <sstream>

#include "katolim/errors.hpp"

namespace katolim::io {

json matrix_to_json(const Matrix& m) {
    json j;
    j["n"] = m.rows();
    if (m.rows() != m.cols()) j["m"] = m.cols();
    json re = json::array(), im = json::array();
    bool any_imag = false;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            rrow.push_back(m(i, c).real());
            irow.push_back(m(i, c).imag());
            if (m(i, c).imag() != 0.0) any_imag = true;
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    j["re"] = std::move(re);
    if (any_imag) j["im"] = std::move(im);
    return j;
}

Matrix matrix_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("re"))
        throw InputError("matrix json needs fields 'n' and 're'");
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t m = j.contains("m") ? j.at("m").get<std::size_t>() : n;
    const auto& re = j.at("re");
    if (re.size() != n) throw InputError("matrix json: 're' has wrong row count");
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != m) throw InputError("matrix json: 're' has a wrong-length row");
        for (std::size_t c = 0; c < m; ++c) out(i, c) = cplx{re[i][c].get<double>(), 0.0};
    }
    if (j.contains("im")) {
        const auto& im = j.at("im");
        if (im.size() != n) throw InputError("matrix json: 'im' has wrong row count");
        for (std::size_t i = 0; i < n; ++i) {
            if (im[i].size() != m) throw InputError("matrix json: 'im' has a wrong-length row");
            for (std::size_t c = 0; c < m; ++c)
                out(i, c) += cplx{0.0, im[i][c].get<double>()};
        }
    }
    if (!out.all_finite()) throw InputError("matrix json has non-finite entries");
    return out;
}

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("failed to parse " + path + ": " + e.what());
    }
    return j;
}

} // namespace

Matrix load_matrix(const std::string& path) {
    try {
        return matrix_from_json(parse_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

PSDMatrix load_psd(const std::string& path) {
    try {
        return PSDMatrix::from(load_matrix(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

json map_to_json(const PositiveMapSpec& m) {
    json j;
    switch (m.kind()) {
        case PositiveMapSpec::Kind::kraus: {
            j["kind"] = "kraus";
            json ops = json::array();
            for (const auto& k : m.operators()) ops.push_back(matrix_to_json(k));
            j["operators"] = std::move(ops);
            break;
        }
        case PositiveMapSpec::Kind::congruence:
            j["kind"] = "congruence";
            j["K"] = matrix_to_json(m.operators().front());
            break;
        case PositiveMapSpec::Kind::block_average:
            j["kind"] = "block_average";
            j["block_dim"] = m.out_dim();
            break;
        case PositiveMapSpec::Kind::trace_state:
            j["kind"] = "trace_state";
            j["rho"] = matrix_to_json(m.state().mat());
            break;
    }
    return j;
}

PositiveMapSpec map_from_json(const json& j) {
    if (!j.contains("kind")) throw InputError("map json needs field 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "kraus") {
        if (!j.contains("operators")) throw InputError("kraus map needs 'operators'");
        std::vector<Matrix> ops;
        for (const auto& o : j.at("operators")) ops.push_back(matrix_from_json(o));
        return PositiveMapSpec::kraus(std::move(ops));
    }
    if (kind == "congruence") {
        if (!j.contains("K")) throw InputError("congruence map needs 'K'");
        return PositiveMapSpec::congruence(matrix_from_json(j.at("K")));
    }
    if (kind == "block_average") {
        if (!j.contains("block_dim")) throw InputError("block_average map needs 'block_dim'");
        return PositiveMapSpec::block_average(j.at("block_dim").get<std::size_t>());
    }
    if (kind == "trace_state") {
        if (!j.contains("rho")) throw InputError("trace_state map needs 'rho'");
        return PositiveMapSpec::trace_state(PSDMatrix::from(matrix_from_json(j.at("rho"))));
    }
    throw InputError("unknown map kind: " + kind);
}

PositiveMapSpec load_map(const std::string& path) {
    try {
        return map_from_json(parse_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

MeanSpec parse_mean(const std::string& text) {
    std::string name = text;
    double alpha = 0.5;
    bool has_alpha = false;
    if (const auto pos = text.find(':'); pos != std::string::npos) {
        name = text.substr(0, pos);
        try {
            alpha = std::stod(text.substr(pos + 1));
        } catch (const std::exception&) {
            throw InputError("mean spec: cannot parse alpha in '" + text + "'");
        }
        has_alpha = true;
    }
    if (name == "arithmetic") return MeanSpec::arithmetic(alpha);
    if (name == "geometric") return MeanSpec::geometric(alpha);
    if (name == "harmonic") return MeanSpec::harmonic(alpha);
    if (name == "logarithmic") {
        if (has_alpha) throw InputError("logarithmic mean takes no alpha");
        return MeanSpec::logarithmic();
    }
    throw InputError("unknown mean '" + name + "' (use name[:alpha])");
}

json congruence_result_to_json(const CongruenceLimitResult& r) {
    json j;
    j["limit"] = matrix_to_json(r.limit.mat());
    json idx = json::array();
    for (auto i : r.indices) idx.push_back(i + 1); // 1-based in reports
    j["selected_indices"] = std::move(idx);
    j["selected_values"] = r.values;
    j["frame"] = matrix_to_json(r.frame);
    j["predicted_spectrum"] = r.predicted_spectrum;
    return j;
}

json map_result_to_json(const MapLimitResult& r) {
    json j;
    j["limit"] = matrix_to_json(r.limit.mat());
    j["values"] = r.values;
    json ps = json::array();
    for (const auto& p : r.projections) ps.push_back(matrix_to_json(p.mat()));
    j["projections"] = std::move(ps);
    return j;
}

json report_to_json(const ConvergenceReport& r) {
    json j;
    j["p_grid"] = r.p_grid;
    json its = json::array();
    for (const auto& it : r.iterates) its.push_back(matrix_to_json(it.mat()));
    j["iterates"] = std::move(its);
    if (r.target) j["target"] = matrix_to_json(r.target->mat());
    if (!r.errors.empty()) j["errors"] = r.errors;
    j["eigenvalue_tracks"] = r.eigenvalue_tracks;
    j["monotone_flag"] = to_string(r.monotone_flag);
    j["max_violation"] = r.max_violation;
    j["cauchy_delta"] = r.cauchy_delta;
    return j;
}

json extended_to_json(const ExtendedReal& v) {
    if (v.infinite) return json("inf");
    return json(v.value);
}

json renyi_to_json(const RenyiPair& r) {
    json j;
    j["d_alpha"] = extended_to_json(r.d_alpha);
    j["d_tilde_alpha"] = extended_to_json(r.d_tilde_alpha);
    return j;
}

json zero_limits_to_json(const ZeroLimitReport& r) {
    json j;
    j["d0"] = extended_to_json(r.d0);
    j["d0_tilde"] = extended_to_json(r.d0_tilde);
    j["q0_tilde"] = r.q0_tilde;
    j["witness_projection"] = matrix_to_json(r.witness.mat());
    j["commutes"] = r.commutes;
    j["equality"] = r.equality;
    return j;
}

std::string format_matrix_table(const Matrix& m, int precision) {
    std::ostringstream out;
    out.precision(precision);
    bool any_imag = false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j).imag() != 0.0) any_imag = true;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << "  ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (any_imag) {
                out << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+")
                    << std::abs(m(i, j).imag()) << "i";
            } else {
                out << m(i, j).real();
            }
            if (j + 1 < m.cols()) out << "  ";
        }
        out << "\n";
    }
    return out.str();
}

} // namespace katolim::io
