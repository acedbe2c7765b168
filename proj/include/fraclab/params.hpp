#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fraclab {

/// Smoothness/integrability parameters (beta, p, q) with the difference order
/// k = 1 + floor(beta). Two admissible regimes:
///   A: beta in (0,n), p in [1, n/beta], q in (0,inf)
///   B: beta in (0,1), p = q in (n/(n+beta), 1)
/// Construction outside both regimes throws. The endpoint p = n/beta is the
/// scale-invariant point: the seminorm is defined there, while operations
/// that need the Sobolev exponent np/(n - p beta) reject it by name. Integer
/// beta is rejected (the fractional part must be positive for the difference
/// order to be the right one).
struct BesovParams {
    double beta = 0.0;
    double p = 0.0;
    double q = 0.0;
    int k = 0;
    int dim = 0;

    static BesovParams create(double beta, double p, double q, int dim) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("BesovParams: dim must be 1, 2, or 3");
        if (!std::isfinite(beta) || !std::isfinite(p) || !std::isfinite(q))
            throw std::invalid_argument("BesovParams: parameters must be finite");
        bool regime_a = beta > 0.0 && beta < dim && p >= 1.0 && p <= double(dim) / beta && q > 0.0;
        bool regime_b = beta > 0.0 && beta < 1.0 && p == q &&
                        p > double(dim) / (dim + beta) && p < 1.0;
        if (!regime_a && !regime_b)
            throw std::invalid_argument(
                "BesovParams: (beta=" + std::to_string(beta) + ", p=" + std::to_string(p) +
                ", q=" + std::to_string(q) + ", n=" + std::to_string(dim) +
                ") lies outside regime A (beta in (0,n), p in [1,n/beta], q>0) and regime B "
                "(beta in (0,1), p=q in (n/(n+beta),1))");
        if (beta == std::floor(beta))
            throw std::invalid_argument("BesovParams: beta must have a positive fractional part");
        BesovParams out;
        out.beta = beta;
        out.p = p;
        out.q = q;
        out.k = 1 + int(std::floor(beta));
        out.dim = dim;
        return out;
    }

    double p_or_q() const { return std::max(p, q); }

    /// np/(n - p beta), the target Lebesgue exponent of the Sobolev chain.
    /// Throws at the scale-invariant endpoint p = n/beta.
    double sobolev_exponent() const {
        if (!(dim - p * beta > 0.0))
            throw std::invalid_argument(
                "BesovParams: p = n/beta violates p < n/beta required for the Sobolev exponent");
        return dim * p / (dim - p * beta);
    }
};

/// Lorentz exponents (p0, q0); q0 may be +inf, which selects the weak norm.
struct LorentzParams {
    double p0 = 1.0;
    double q0 = 1.0;

    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    static LorentzParams create(double p0, double q0) {
        if (!(p0 > 0.0) || !std::isfinite(p0))
            throw std::invalid_argument("LorentzParams: p0 must be positive and finite");
        if (!(q0 > 0.0)) throw std::invalid_argument("LorentzParams: q0 must be positive");
        return LorentzParams{p0, q0};
    }

    bool weak() const { return std::isinf(q0); }
};

}  // namespace fraclab
