#pragma once

namespace hhv::means {

/// Pair of strictly positive finite reals; the constructor enforces it.
class PositivePair {
public:
    PositivePair(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

private:
    double p_;
    double q_;
};

// Relative gap |p - q| / max(p, q) at or below which the logarithmic mean
// switches from the closed form to its series about the midpoint.
inline constexpr double near_equal_threshold = 1e-8;

/// A(p, q) = (p + q) / 2
double arithmetic(const PositivePair& pair);

/// G(p, q) = sqrt(p q), free of intermediate overflow/underflow.
double geometric(const PositivePair& pair);

/// L(p, q) = (p - q) / (ln p - ln q), with L(p, p) = p exactly.
double logarithmic(const PositivePair& pair);

inline double arithmetic(double p, double q) { return arithmetic(PositivePair(p, q)); }
inline double geometric(double p, double q) { return geometric(PositivePair(p, q)); }
inline double logarithmic(double p, double q) { return logarithmic(PositivePair(p, q)); }

}  // namespace hhv::means
