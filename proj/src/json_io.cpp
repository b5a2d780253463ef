#include "qcx/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcx/errors.hpp"

namespace qcx {

Json matrix_to_json(const Mat& m) {
    const auto rows = m.rows(), cols = m.cols();
    Json re = Json::array(), im = Json::array();
    bool complex_entries = false;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
            if (m(r, c).imag() != 0.0) complex_entries = true;
        }
    Json j{{"rows", rows}, {"cols", cols}, {"re", std::move(re)}};
    if (complex_entries) j["im"] = std::move(im);
    return j;
}

Mat matrix_from_json(const Json& j) {
    try {
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        if (rows < 0 || cols < 0) throw ParseError("negative matrix dimension");
        const auto& re = j.at("re");
        if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != rows * cols)
            throw ParseError("'re' must hold rows*cols entries");
        const Json* im = j.contains("im") && !j.at("im").is_null() ? &j.at("im") : nullptr;
        if (im && (!im->is_array() || static_cast<Eigen::Index>(im->size()) != rows * cols))
            throw ParseError("'im' must hold rows*cols entries");
        Mat m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) {
                const auto k = static_cast<std::size_t>(r * cols + c);
                m(r, c) = cxd(re[k].get<double>(), im ? (*im)[k].get<double>() : 0.0);
            }
        return m;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("matrix: ") + e.what());
    }
}

Json complex_to_json(const QuasiComplex& qc) {
    Json spaces = Json::array();
    for (const InnerProductSpace& s : qc.spaces()) {
        Json entry{{"dim", s.dim()}};
        if (s.orthonormal())
            entry["gram"] = nullptr;
        else
            entry["gram"] = matrix_to_json(s.gram());
        spaces.push_back(std::move(entry));
    }
    Json diffs = Json::array();
    for (const LinearOp& d : qc.diffs()) diffs.push_back(matrix_to_json(d.mat));
    return Json{{"spaces", std::move(spaces)}, {"diffs", std::move(diffs)},
                {"orders", qc.orders()}};
}

QuasiComplex complex_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("spaces") || !j.contains("diffs"))
            throw ParseError("complex JSON must carry 'spaces' and 'diffs'");
        std::vector<InnerProductSpace> spaces;
        for (const Json& entry : j.at("spaces")) {
            const int dim = entry.at("dim").get<int>();
            if (dim < 0) throw ParseError("negative space dimension");
            if (entry.contains("gram") && !entry.at("gram").is_null())
                spaces.emplace_back(dim, matrix_from_json(entry.at("gram")));
            else
                spaces.emplace_back(dim);
        }
        std::vector<Mat> diffs;
        for (const Json& d : j.at("diffs")) diffs.push_back(matrix_from_json(d));
        std::optional<std::vector<double>> orders;
        if (j.contains("orders") && !j.at("orders").is_null())
            orders = j.at("orders").get<std::vector<double>>();
        return QuasiComplex(std::move(spaces), std::move(diffs), std::move(orders));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("complex: ") + e.what());
    }
}

Json sample_to_json(const SymbolComplexSample& sample) {
    Json mats = Json::array();
    for (const Mat& m : sample.mats) mats.push_back(matrix_to_json(m));
    return Json{{"point_id", sample.point_id},
                {"xi_norm", sample.xi_norm},
                {"orders", sample.orders},
                {"mats", std::move(mats)}};
}

SymbolComplexSample sample_from_json(const Json& j) {
    try {
        SymbolComplexSample sample;
        sample.point_id = j.at("point_id").get<std::string>();
        sample.xi_norm = j.at("xi_norm").get<double>();
        sample.orders = j.at("orders").get<std::vector<double>>();
        for (const Json& m : j.at("mats")) sample.mats.push_back(matrix_from_json(m));
        if (sample.mats.empty()) throw ParseError("sample needs at least one matrix");
        sample.fiber_dims.push_back(static_cast<int>(sample.mats.front().cols()));
        for (const Mat& m : sample.mats) sample.fiber_dims.push_back(static_cast<int>(m.rows()));
        return sample;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("sample: ") + e.what());
    }
}

std::vector<Mat> endo_maps_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("maps"))
            throw ParseError("endomorphism JSON must carry 'maps'");
        std::vector<Mat> maps;
        for (const Json& m : j.at("maps")) maps.push_back(matrix_from_json(m));
        return maps;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("endomorphism: ") + e.what());
    }
}

Json hodge_to_json(const HodgeData& data) {
    return Json{{"step", data.step},
                {"laplacian", matrix_to_json(data.laplacian.mat)},
                {"harmonic_projector", matrix_to_json(data.harmonic_projector.mat)},
                {"green", matrix_to_json(data.green.mat)},
                {"parametrix", matrix_to_json(data.parametrix.mat)},
                {"residuals",
                 {{"idempotence", data.idempotence_defect},
                  {"self_adjoint", data.self_adjoint_defect},
                  {"green_identity", data.green_identity_defect},
                  {"green_harmonic", data.green_harmonic_defect}}}};
}

Json reduction_to_json(const ReductionResult& res, bool embed_reduced) {
    Json log = Json::array();
    for (const SweepStepLog& step : res.sweep_log)
        log.push_back({{"laplacian_step", step.laplacian_step},
                       {"green_norm", step.green_norm},
                       {"parametrix_norm", step.parametrix_norm},
                       {"projector_presym_defect", step.projector_presym_defect},
                       {"projector_idem_defect", step.projector_idem_defect},
                       {"kernel_dim", step.kernel_dim},
                       {"kappa", step.kappa}});
    Json j{{"diff_norms", res.diff_norms},
           {"curvature_after", res.curvature_after},
           {"curvature_after_rel", res.curvature_after_rel},
           {"kappas", res.kappas},
           {"max_input_curvature", res.max_input_curvature},
           {"max_input_curvature_rel", res.max_input_curvature_rel},
           {"reduction_tol", res.reduction_tol},
           {"certified", res.certified},
           {"sweep_log", std::move(log)}};
    if (embed_reduced) j["reduced"] = complex_to_json(res.reduced);
    return j;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << content;
    if (!out) throw InvalidInput("write to '" + path + "' failed");
}

std::string input_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void ensure_finite(const Json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw InvalidInput("non-finite number in report");
    if (j.is_array() || j.is_object())
        for (const Json& child : j) ensure_finite(child);
}

} // namespace qcx
