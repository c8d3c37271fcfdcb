#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace monospde {

/// Increments of finitely many independent Wiener processes W^k on a
/// uniform time grid. Draws are keyed by (seed, stream, level, step, mode),
/// so a path is reproducible from its key alone and refinement never
/// disturbs the coarse increments.
class NoisePath {
public:
    int modes() const { return modes_; }
    std::size_t steps() const { return steps_; }
    double dt() const { return dt_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    int level() const { return level_; }

    /// Increment of mode k over step s.
    double increment(std::size_t s, int k) const { return increments_[s * modes_ + k]; }
    /// All mode increments of one step.
    std::span<const double> step_increments(std::size_t s) const {
        return {increments_.data() + s * modes_, static_cast<std::size_t>(modes_)};
    }

    /// CSV with header `step,t,mode,dW`.
    void write_csv(std::ostream& out) const;

    friend NoisePath sample_path(int modes, std::size_t steps, double dt, std::uint64_t seed, std::uint64_t stream);
    friend NoisePath brownian_bridge_refine(const NoisePath& path, int factor);

private:
    int modes_ = 0;
    std::size_t steps_ = 0;
    double dt_ = 0.0;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    int level_ = 0;
    std::vector<double> increments_;
};

/// i.i.d. N(0, dt) increments. Throws std::invalid_argument for modes < 0,
/// steps < 1 or dt <= 0.
NoisePath sample_path(int modes, std::size_t steps, double dt, std::uint64_t seed, std::uint64_t stream);

/// Splits every step into `factor` substeps by Brownian bridge sampling
/// (factor a power of two). Each pair of fine increments sums to the
/// increment it refines. Throws std::invalid_argument otherwise.
NoisePath brownian_bridge_refine(const NoisePath& path, int factor);

}  // namespace monospde
