#ifndef GEORIESZ_POINTSETS_HPP
#define GEORIESZ_POINTSETS_HPP

#include <cstdint>
#include <vector>

#include "georiesz/energy.hpp"
#include "georiesz/potential.hpp"
#include "georiesz/sphere.hpp"

namespace georiesz {

enum class PointSetKind {
    RandomUniform,
    Fibonacci,         // golden-angle spiral, d = 2
    EqualSpacedCircle, // d = 1
    EqualAreaCenters,  // zonal-band partition centers, d <= 2
    SymmetricRandom,   // N/2 random points plus antipodes, N even
};

/// Deterministic for fixed (kind, N, seed); structured kinds ignore the seed.
PointSet generate(PointSetKind kind, int N, const SphereContext& ctx, std::uint64_t seed);

struct PartitionCell {
    std::vector<double> center;
    double area = 0.0;           // exactly 1/N by construction
    double diameter_bound = 0.0; // geodesic diameter of the cell
};

struct EqualAreaPartition {
    SphereContext ctx;
    std::vector<PartitionCell> cells;
    double max_diameter = 0.0;
};

/// Zonal-band equal-area partition (equal arcs on the circle): cell measures
/// are exactly 1/N analytically; diameters are O(N^{-1/d}) with the realized
/// constant reported via max_diameter.
EqualAreaPartition equal_area_partition(int N, const SphereContext& ctx);

struct OptimizerOptions {
    int max_iterations = 1000;
    double initial_step = 0.05;
    double armijo_factor = 0.5;    // backtracking multiplier
    double armijo_constant = 1e-4; // sufficient-decrease constant
    double grad_tol = 1e-9;        // stop on Riemannian gradient norm
    double stall_tol = 0.0;        // optional stop on relative energy stall
    double clamp_margin = 1e-12;   // eta: |x.y| <= 1 - eta inside gradients
    int max_backtracks = 48;
    double step_growth = 1.3;
    // Pattern-search sweeps after gradient descent.  The energy is only
    // directionally differentiable on the antipodal cut locus, where the
    // extremal configurations often sit; the polish pushes through that
    // kink.  0 disables.
    int polish_sweeps = 40;
    double polish_radius = 0.0; // 0: derived from the mesh scale N^{-1/d}
    std::uint64_t seed = 0;     // recorded in reports only
};

struct OptimizeReport {
    PointSet points;
    std::vector<double> energy_trace; // accepted energies, E(Z0) first
    double final_grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Riemannian projected gradient descent on the product of spheres for the
/// discrete energy (ascent for geodesic delta in (0,1)); renormalization
/// retraction, Armijo backtracking, monotone accepted energies.  The result
/// is never worse than E(Z0).
OptimizeReport optimize_energy(const PointSet& z0, const PotentialSpec& spec,
                               const OptimizerOptions& opts);

/// The pairwise energy and its Riemannian gradient (tangent-projected,
/// row-major like the coordinates); exposed for derivative checks.
double energy_gradient(const PointSet& z, const PotentialSpec& spec, std::vector<double>& grad,
                       double clamp_margin = 1e-12);

} // namespace georiesz

#endif
