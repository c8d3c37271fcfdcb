#include "monospde/sampled_field.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "monospde/errors.hpp"

namespace monospde {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("sampled field: non-numeric cell '" + s + "' on line " + std::to_string(line));
    return v;
}

// Bracketing index and weight for linear interpolation with clamping.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double v) {
    if (axis.size() == 1 || v <= axis.front()) return {0, 0.0};
    if (v >= axis.back()) return {axis.size() - 2, 1.0};
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - axis.begin()) - 1;
    return {i, (v - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

SampledField SampledField::parse_csv(std::istream& in, int dim) {
    if (dim != 1 && dim != 2) throw ConfigError("sampled field: dimension must be 1 or 2");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("sampled field: empty input");
    const auto header = split(line);
    const std::vector<std::string> expected =
        dim == 1 ? std::vector<std::string>{"t", "x", "value"} : std::vector<std::string>{"t", "x", "y", "value"};
    if (header != expected) throw ConfigError("sampled field: header must be '" + std::string(dim == 1 ? "t,x,value" : "t,x,y,value") + "'");

    std::map<std::tuple<double, double, double>, double> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != expected.size())
            throw ConfigError("sampled field: wrong number of columns on line " + std::to_string(lineno));
        const double t = parse_number(cells[0], lineno);
        const double x = parse_number(cells[1], lineno);
        const double y = dim == 2 ? parse_number(cells[2], lineno) : 0.0;
        const double v = parse_number(cells.back(), lineno);
        if (!std::isfinite(v)) throw ConfigError("sampled field: non-finite value on line " + std::to_string(lineno));
        rows[{t, x, y}] = v;
    }
    if (rows.empty()) throw ConfigError("sampled field: no data rows");

    SampledField f;
    f.dim_ = dim;
    for (const auto& [key, v] : rows) {
        f.t_.push_back(std::get<0>(key));
        f.x_.push_back(std::get<1>(key));
        f.y_.push_back(std::get<2>(key));
    }
    for (auto* axis : {&f.t_, &f.x_, &f.y_}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }
    if (f.t_.size() * f.x_.size() * f.y_.size() != rows.size())
        throw ConfigError("sampled field: rows do not form a full (t, x" + std::string(dim == 2 ? ", y" : "") + ") lattice");
    f.values_.reserve(rows.size());
    for (const auto& [key, v] : rows) f.values_.push_back(v);  // map order matches the lattice order
    return f;
}

SampledField SampledField::load_csv(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("sampled field: cannot open '" + path + "'");
    return parse_csv(in, dim);
}

double SampledField::operator()(double t, Point x) const {
    const std::size_t nx = x_.size(), ny = y_.size();
    const auto [it, wt] = locate(t_, t);
    const auto [ix, wx] = locate(x_, x[0]);
    const auto [iy, wy] = dim_ == 2 ? locate(y_, x[1]) : std::pair<std::size_t, double>{0, 0.0};
    auto at = [&](std::size_t a, std::size_t b, std::size_t c) {
        a = std::min(a, t_.size() - 1);
        b = std::min(b, nx - 1);
        c = std::min(c, ny - 1);
        return values_[(a * nx + b) * ny + c];
    };
    double acc = 0.0;
    for (int da = 0; da < 2; ++da)
        for (int db = 0; db < 2; ++db)
            for (int dc = 0; dc < 2; ++dc) {
                const double w = (da ? wt : 1.0 - wt) * (db ? wx : 1.0 - wx) * (dc ? wy : 1.0 - wy);
                if (w != 0.0) acc += w * at(it + da, ix + db, iy + dc);
            }
    return acc;
}

}  // namespace monospde
