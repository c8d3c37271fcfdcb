#pragma once

#include <istream>
#include <string>
#include <vector>

#include "monospde/types.hpp"

namespace monospde {

/// Scalar field sampled on a tensor lattice in (t, x[, y]), read from CSV
/// with header `t,x,value` or `t,x,y,value`. Evaluation is multilinear and
/// clamps to the sampled range.
class SampledField {
public:
    /// Throws ConfigError on a malformed header, non-numeric cells, or rows
    /// that do not fill the full lattice.
    static SampledField parse_csv(std::istream& in, int dim);
    static SampledField load_csv(const std::string& path, int dim);

    double operator()(double t, Point x) const;
    bool time_independent() const { return t_.size() == 1; }
    int dim() const { return dim_; }

private:
    int dim_ = 1;
    std::vector<double> t_, x_, y_;
    std::vector<double> values_;  // index ((it * nx) + ix) * ny + iy
};

}  // namespace monospde
