#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exitlab/errors.hpp"

namespace exitlab {

using cpx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce an angle to [0, 2*pi).
double mod_two_pi(double x);

// ---------------------------------------------------------------------------
// Domain algebra.
//
// Domains are open subsets of the plane built from a small set of primitives.
// The spiral families are evaluated in logarithmic coordinates, where a
// logarithmic spiral of order sigma pulls back to the straight line
// i*angle + t*exp(-i*sigma) modulo 2*pi*i; membership and distances there are
// exact up to rounding.
// ---------------------------------------------------------------------------

struct Disk {
    cpx center;
    double radius = 1.0;
};

struct HalfPlane {
    cpx boundary_point;
    double inward_normal_angle = 0.0;
};

// Infinite wedge with vertex 0, bisected by the positive real axis.
// Full opening angle is 2*half_angle; half_angle in (0, pi].
struct Wedge {
    double half_angle = kPi / 4.0;
};

// {exp(i*theta) * exp(t*exp(-i*sigma)) : t real, theta in (angle_lo, angle_hi)},
// the spiral sector N_{angle_lo}^{angle_hi} of order sigma.
struct SpiralSector {
    double order = 0.0; // sigma in [0, pi/2)
    double angle_lo = 0.0;
    double angle_hi = kPi; // angle_hi - angle_lo in (0, 2*pi]
};

// Plane minus the spiral rays {r0*exp(i*a)*exp(t*exp(-i*sigma)) : t >= 0},
// one per angle a in ray_angles.
struct SpiralComplement {
    double order = 0.0;
    double start_radius = 1.0;
    std::vector<double> ray_angles; // sorted, distinct, in [0, 2*pi)
};

struct DomainSpec;

struct UnionDomain {
    std::vector<DomainSpec> members;
};

// Image of a base domain under (a*z + b) / (c*z + d), ad - bc != 0.
struct MobiusImage {
    std::shared_ptr<const DomainSpec> base;
    cpx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};
};

struct DomainSpec {
    std::variant<Disk, HalfPlane, Wedge, SpiralSector, SpiralComplement,
                 UnionDomain, MobiusImage>
        node;

    static DomainSpec disk(cpx center, double radius);
    static DomainSpec half_plane(cpx boundary_point, double inward_normal_angle);
    static DomainSpec wedge(double half_angle);
    static DomainSpec spiral_sector(double order, double angle_lo, double angle_hi);
    static DomainSpec spiral_complement(double order, double start_radius,
                                        std::vector<double> ray_angles);
    static DomainSpec union_of(std::vector<DomainSpec> members);
    static DomainSpec mobius_image(DomainSpec base, cpx a, cpx b, cpx c, cpx d);

    // Throws Error(Err::BadSpec) when a parameter constraint is violated.
    void validate() const;

    std::string type_name() const;
};

// True iff z lies in the open domain. Total: never throws.
bool contains(const DomainSpec& domain, cpx z);

// Radius rho >= 0 such that the open disk B(z, rho) lies inside the domain.
// Exact for Disk/HalfPlane/Wedge; conservative for the spiral families
// (|z|*(1-exp(-d_log)) with d_log the exact log-plane distance), Union (max
// over containing members) and MobiusImage (Koebe quarter bound).
// Throws Error(Err::PointOutsideDomain) when z is not in the domain.
double dist_lower_bound(const DomainSpec& domain, cpx z);

// A boundary point near z; exact projection for the primitive families.
// Usable from either side of the boundary.
cpx nearest_boundary_point(const DomainSpec& domain, cpx z);

// ---------------------------------------------------------------------------
// Boundary parametrizations.
// ---------------------------------------------------------------------------

// One naturally parametrized piece of a primitive's topological boundary.
struct BoundaryCurve {
    std::function<cpx(double)> point;         // t in [t_lo, t_hi]
    std::function<cpx(double)> inward_normal; // unit vector into the domain
    double t_lo = 0.0;
    double t_hi = 1.0;
    bool truncated = false; // t range clipped at the modulus cap
    std::string tag;
};

// All boundary curves of the domain, with unbounded curves truncated at
// |z| <= modulus_cap. For Union members, the parts interior to the union are
// NOT removed here; see restrict_to.
std::vector<BoundaryCurve> boundary_curves(const DomainSpec& domain,
                                           double modulus_cap);

// Portion of a boundary selected by a pointwise predicate, stored as
// parameter subintervals of the underlying curves.
struct BoundarySegment {
    struct Piece {
        BoundaryCurve curve;
        double a = 0.0, b = 1.0; // subinterval of [curve.t_lo, curve.t_hi]
    };
    std::vector<Piece> pieces;
    std::string tag;
    bool truncated = false;

    double total_weight() const;
    cpx at(double u) const; // u in [0,1], proportional over pieces
    bool empty() const { return pieces.empty(); }
};

// Subset of the domain's boundary where keep(point) holds; transitions are
// located by scan plus bisection to parameter tolerance ~1e-9.
BoundarySegment restrict_boundary(const DomainSpec& domain,
                                  const std::function<bool(cpx)>& keep,
                                  double modulus_cap, const std::string& tag,
                                  int scan_n = 4096);

// n points on the segment; piece endpoints are pulled inward by
// margin * (piece length) in parameter space.
// Throws Error(Err::DegenerateSegment) when the segment has no extent.
std::vector<cpx> boundary_grid(const BoundarySegment& segment, int n,
                               double margin = 1e-3);

// ---------------------------------------------------------------------------
// Largest-arc functional.
// ---------------------------------------------------------------------------

// Angular measure of the largest subarc of {|z| = r} contained in the domain.
// Returns 0 when the circle misses the domain. The sweep of the membership
// oracle is augmented with analytically known cut angles: spiral rays meet
// the circle in isolated points, which no finite sampling can detect.
double largest_arc(const DomainSpec& domain, double r,
                   double angle_tol = 1e-6, int scan_n = 2048);

struct ArcLimit {
    double value = 0.0;                          // A_W estimate (last radius)
    std::vector<std::pair<double, double>> trace; // (r, A_{r,W})
    bool converged = false;
};

// A_W as the limit of A_{r,W} over a geometric radius sequence.
ArcLimit largest_arc_limit(const DomainSpec& domain, double r0 = 1.0,
                           double factor = 2.0, int count = 24);

// Exact critical exponent p* with E[T^p] < infinity iff p < p*, for the
// families where it is known in closed form (disk: +infinity; half-plane:
// 1/2; wedge and spiral families: pi / (2 * A_W * cos^2 sigma)).
// nullopt for Union/MobiusImage, where no closed form is implemented.
std::optional<double> critical_exponent(const DomainSpec& domain);

} // namespace exitlab
