#include "monospde/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "monospde/counter_rng.hpp"

namespace monospde {

NoisePath sample_path(int modes, std::size_t steps, double dt, std::uint64_t seed, std::uint64_t stream) {
    if (modes < 0) throw std::invalid_argument("noise: modes must be non-negative");
    if (steps < 1) throw std::invalid_argument("noise: need at least one step");
    if (!(dt > 0.0)) throw std::invalid_argument("noise: dt must be positive");
    NoisePath p;
    p.modes_ = modes;
    p.steps_ = steps;
    p.dt_ = dt;
    p.seed_ = seed;
    p.stream_ = stream;
    p.increments_.resize(steps * static_cast<std::size_t>(modes));
    const double scale = std::sqrt(dt);
    for (std::size_t s = 0; s < steps; ++s)
        for (int k = 0; k < modes; ++k)
            p.increments_[s * modes + k] =
                scale * counter_rng::normal(counter_rng::hash({seed, stream, 0, s, static_cast<std::uint64_t>(k)}));
    return p;
}

NoisePath brownian_bridge_refine(const NoisePath& path, int factor) {
    if (factor < 1 || (factor & (factor - 1)) != 0)
        throw std::invalid_argument("bridge refinement factor must be a power of two");
    NoisePath cur = path;
    for (int f = factor; f > 1; f /= 2) {
        NoisePath fine;
        fine.modes_ = cur.modes_;
        fine.steps_ = cur.steps_ * 2;
        fine.dt_ = cur.dt_ / 2.0;
        fine.seed_ = cur.seed_;
        fine.stream_ = cur.stream_;
        fine.level_ = cur.level_ + 1;
        fine.increments_.resize(fine.steps_ * fine.modes_);
        // Given W over [0, dt] with increment dW, the midpoint increment is
        // N(dW / 2, dt / 4).
        const double half_sd = std::sqrt(cur.dt_) / 2.0;
        for (std::size_t s = 0; s < cur.steps_; ++s)
            for (int k = 0; k < cur.modes_; ++k) {
                const double dw = cur.increment(s, k);
                const double z = counter_rng::normal(counter_rng::hash(
                    {cur.seed_, cur.stream_, static_cast<std::uint64_t>(fine.level_), s, static_cast<std::uint64_t>(k)}));
                const double first = 0.5 * dw + half_sd * z;
                fine.increments_[(2 * s) * fine.modes_ + k] = first;
                fine.increments_[(2 * s + 1) * fine.modes_ + k] = dw - first;
            }
        cur = std::move(fine);
    }
    return cur;
}

void NoisePath::write_csv(std::ostream& out) const {
    out << "step,t,mode,dW\n";
    out.precision(17);
    for (std::size_t s = 0; s < steps_; ++s)
        for (int k = 0; k < modes_; ++k) out << s << ',' << s * dt_ << ',' << k << ',' << increment(s, k) << '\n';
}

}  // namespace monospde
