#include "cfarfp/boundary_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cfarfp {

using nlohmann::json;

std::string boundary_to_json(const Boundary& b) {
    json j;
    if (auto* pl = dynamic_cast<const PiecewiseLinearBoundary*>(&b)) {
        j["type"] = "piecewise_linear";
        j["k"] = pl->segments();
        j["m"] = pl->slopes();
        j["eps"] = pl->intercepts();
    } else if (auto* tab = dynamic_cast<const TabulatedBoundary*>(&b)) {
        j["type"] = "tabulated";
        j["beta"] = tab->grid();
        j["t"] = tab->values();
    } else if (auto* sp = dynamic_cast<const SplineBoundary*>(&b)) {
        j["type"] = "spline";
        j["order"] = sp->order();
        json control = json::array();
        for (auto& [x, y] : sp->control_points()) control.push_back({x, y});
        j["control"] = std::move(control);
    } else {
        // Generic curves are persisted as a dense table.
        constexpr int kSamples = 513;
        std::vector<double> beta(kSamples), t(kSamples);
        for (int i = 0; i < kSamples; ++i) {
            beta[i] = static_cast<double>(i) / (kSamples - 1);
            t[i] = b.evaluate(beta[i]);
        }
        j["type"] = "tabulated";
        j["beta"] = std::move(beta);
        j["t"] = std::move(t);
    }
    return j.dump(2) + "\n";
}

std::unique_ptr<Boundary> boundary_from_json(const std::string& text) {
    const json j = json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    if (type == "piecewise_linear") {
        auto m = j.at("m").get<std::vector<double>>();
        auto eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("k") && j.at("k").get<int>() != static_cast<int>(m.size()))
            throw InvalidBoundary("piecewise_linear: k does not match coefficient count");
        return std::make_unique<PiecewiseLinearBoundary>(std::move(m), std::move(eps));
    }
    if (type == "tabulated") {
        return std::make_unique<TabulatedBoundary>(
            j.at("beta").get<std::vector<double>>(), j.at("t").get<std::vector<double>>());
    }
    if (type == "spline") {
        std::vector<std::pair<double, double>> control;
        for (const auto& row : j.at("control"))
            control.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return std::make_unique<SplineBoundary>(std::move(control), j.at("order").get<int>());
    }
    throw InvalidBoundary("unknown boundary type: " + type);
}

std::unique_ptr<Boundary> load_boundary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_boundary: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return boundary_from_json(ss.str());
}

void save_boundary(const Boundary& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_boundary: cannot open " + path);
    out << boundary_to_json(b);
}

}  // namespace cfarfp
