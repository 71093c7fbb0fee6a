#ifndef GEORIESZ_ENERGY_HPP
#define GEORIESZ_ENERGY_HPP

#include <span>
#include <string>
#include <vector>

#include "georiesz/potential.hpp"
#include "georiesz/sphere.hpp"

namespace georiesz {

/// N unit vectors in R^{d+1}, row-major.
struct PointSet {
    int d = 2;
    std::vector<double> coords;

    PointSet() = default;
    PointSet(int dim, int n) : d(dim), coords(static_cast<std::size_t>(n) * (dim + 1), 0.0) {}

    int size() const { return d >= 0 ? static_cast<int>(coords.size()) / (d + 1) : 0; }
    std::span<const double> point(int i) const {
        return {coords.data() + static_cast<std::size_t>(i) * (d + 1),
                static_cast<std::size_t>(d) + 1};
    }
    std::span<double> point(int i) {
        return {coords.data() + static_cast<std::size_t>(i) * (d + 1),
                static_cast<std::size_t>(d) + 1};
    }

    /// Throws unless every norm is 1 within tol.
    void check_norms(double tol = 1e-12) const;
    /// Minimum pairwise geodesic distance (0 for N < 2 means coincidence).
    double min_pairwise_distance() const;
};

/// Text format: one point per line, d+1 whitespace-separated decimals;
/// the writer emits 17 significant digits.
PointSet read_pointset_text(const std::string& path);
void write_pointset_text(const PointSet& z, const std::string& path);

/// One of the four measure families the energy integral is evaluated on.
struct MeasureSpec {
    enum class Kind { Uniform, Discrete, TwoPoint, PerturbedHarmonic };

    Kind kind = Kind::Uniform;
    PointSet points;        // discrete empirical measure
    int degree = 1;         // perturbed harmonic degree n >= 1
    double amplitude = 0.0; // perturbation amplitude

    static MeasureSpec uniform();
    static MeasureSpec discrete(PointSet z);
    static MeasureSpec two_point();
    static MeasureSpec perturbed_harmonic(int degree, double amplitude);
};

/// I_F(sigma) through the 1-D reduction
///   Gamma((d+1)/2)/(Gamma(d/2) Gamma(1/2)) int_0^pi F(cos th) sin^{d-1} th dth.
/// Throws a divergence error for geodesic delta <= -d at eps = 0.
double uniform_energy(const SphereContext& ctx, const PotentialSpec& spec, double tol = 1e-11);

/// Diagonal-free discrete energy sum_{i<j} F(z_i . z_j); throws naming the
/// pair if points coincide while F(1) is singular.
double discrete_energy(const PointSet& z, const PotentialSpec& spec);

/// I_F(mu) for the four measure kinds.  Discrete measures include the
/// diagonal (i = j) terms and are refused when F(1) is singular -- use
/// discrete_energy for the diagonal-free sum in that regime.  Two-point
/// measures evaluate to (F(1) + F(-1))/2, which is +infinity for singular
/// F(1).
double measure_energy(const MeasureSpec& mu, const PotentialSpec& spec, const SphereContext& ctx);

/// Nonnegative spectral moment of the empirical measure,
///   b_n = N^{-2} sum_{i,j} zonal_eval(n, ctx, z_i . z_j),
/// bounded by harmonic_dim(n, ctx).
double spectral_moment(const PointSet& z, int n, const SphereContext& ctx);

/// All moments b_0..b_K in one recurrence pass per point pair.
std::vector<double> spectral_moments(const PointSet& z, const SphereContext& ctx, int K);

} // namespace georiesz

#endif
