#include "exitlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace exitlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(cpx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Distance from x to the nearest point of the lattice {period * k}.
double dist_to_lattice(double x, double period) {
    const double r = x - period * std::round(x / period);
    return std::abs(r);
}

// Distance from z to the ray {s * exp(i*angle) : s >= 0}.
double dist_to_ray(cpx z, double angle) {
    const cpx y = z * std::polar(1.0, -angle);
    if (y.real() >= 0.0) return std::abs(y.imag());
    return std::abs(y);
}

cpx project_to_ray(cpx z, double angle) {
    const cpx y = z * std::polar(1.0, -angle);
    const double s = std::max(y.real(), 0.0);
    return std::polar(s, angle);
}

// Log-plane anchor of the spiral through start, and the signed offset of
// w = log z from the line {anchor + t*exp(-i*sigma)}.
double spiral_line_offset(cpx w, cpx anchor, double sigma) {
    const cpx rel = (w - anchor) * std::polar(1.0, sigma);
    return rel.imag();
}

struct HalfLineHit {
    double dist = kInf;
    cpx foot; // log-plane point realizing it
};

// Distance in the log plane from w to the half-line
// {anchor + 2*pi*i*k + t*exp(-i*sigma) : t >= 0}, minimized over branches k.
HalfLineHit dist_to_spiral_halfline(cpx w, cpx anchor, double sigma) {
    const double cs = std::cos(sigma);
    const cpx rot = std::polar(1.0, sigma);
    // Offset varies linearly in k with slope -2*pi*cos(sigma); search a
    // small window around the branch that zeroes it.
    const cpx rel0 = (w - anchor) * rot;
    const double k0 = rel0.imag() / (kTwoPi * cs);
    HalfLineHit best;
    const long kc = std::lround(k0);
    for (long k = kc - 2; k <= kc + 2; ++k) {
        const cpx anchor_k = anchor + cpx(0.0, kTwoPi * static_cast<double>(k));
        const cpx rel = (w - anchor_k) * rot;
        const double t = std::max(rel.real(), 0.0);
        const cpx foot = anchor_k + t * std::conj(rot);
        const double d = std::abs(w - foot);
        if (d < best.dist) {
            best.dist = d;
            best.foot = foot;
        }
    }
    return best;
}

// As above for the full line (t unrestricted), used by SpiralSector.
HalfLineHit dist_to_spiral_line(cpx w, cpx anchor, double sigma) {
    const double cs = std::cos(sigma);
    const cpx rot = std::polar(1.0, sigma);
    const double off = spiral_line_offset(w, anchor, sigma);
    const double d = dist_to_lattice(off, kTwoPi * cs);
    // Reconstruct the foot point on the realizing branch.
    const double k = std::round(off / (kTwoPi * cs));
    const cpx anchor_k = anchor + cpx(0.0, kTwoPi * k);
    const cpx rel = (w - anchor_k) * rot;
    const cpx foot = anchor_k + rel.real() * std::conj(rot);
    return {d, foot};
}

cpx mobius_apply(const MobiusImage& m, cpx z) {
    return (m.a * z + m.b) / (m.c * z + m.d);
}

cpx mobius_inverse(const MobiusImage& m, cpx z) {
    return (m.d * z - m.b) / (-m.c * z + m.a);
}

// Spiral phase: constant along logarithmic spirals of order sigma.
double spiral_phase(cpx z, double sigma) {
    return std::arg(z) + std::tan(sigma) * std::log(std::abs(z));
}

} // namespace

double mod_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// ---------------------------------------------------------------------------
// Construction / validation
// ---------------------------------------------------------------------------

DomainSpec DomainSpec::disk(cpx center, double radius) {
    DomainSpec s{Disk{center, radius}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::half_plane(cpx boundary_point, double inward_normal_angle) {
    DomainSpec s{HalfPlane{boundary_point, inward_normal_angle}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::wedge(double half_angle) {
    DomainSpec s{Wedge{half_angle}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::spiral_sector(double order, double angle_lo, double angle_hi) {
    DomainSpec s{SpiralSector{order, angle_lo, angle_hi}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::spiral_complement(double order, double start_radius,
                                         std::vector<double> ray_angles) {
    std::sort(ray_angles.begin(), ray_angles.end());
    DomainSpec s{SpiralComplement{order, start_radius, std::move(ray_angles)}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::union_of(std::vector<DomainSpec> members) {
    DomainSpec s{UnionDomain{std::move(members)}};
    s.validate();
    return s;
}

DomainSpec DomainSpec::mobius_image(DomainSpec base, cpx a, cpx b, cpx c, cpx d) {
    DomainSpec s{MobiusImage{std::make_shared<DomainSpec>(std::move(base)), a, b, c, d}};
    s.validate();
    return s;
}

void DomainSpec::validate() const {
    std::visit(
        [](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                if (!(n.radius > 0.0) || !finite(n.center))
                    throw Error(Err::BadSpec, "disk: radius must be positive and center finite");
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                if (!finite(n.boundary_point) || !std::isfinite(n.inward_normal_angle))
                    throw Error(Err::BadSpec, "half_plane: parameters must be finite");
            } else if constexpr (std::is_same_v<T, Wedge>) {
                if (!(n.half_angle > 0.0) || !(n.half_angle <= kPi))
                    throw Error(Err::BadSpec, "wedge: half_angle must be in (0, pi]");
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                if (!(n.order >= 0.0) || !(n.order < kPi / 2.0))
                    throw Error(Err::BadSpec, "spiral_sector: order must be in [0, pi/2)");
                const double gap = n.angle_hi - n.angle_lo;
                if (!(gap > 0.0) || !(gap <= kTwoPi))
                    throw Error(Err::BadSpec, "spiral_sector: angle_hi - angle_lo must be in (0, 2*pi]");
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                if (!(n.order >= 0.0) || !(n.order < kPi / 2.0))
                    throw Error(Err::BadSpec, "spiral_complement: order must be in [0, pi/2)");
                if (!(n.start_radius > 0.0))
                    throw Error(Err::BadSpec, "spiral_complement: start_radius must be positive");
                if (n.ray_angles.empty())
                    throw Error(Err::BadSpec, "spiral_complement: at least one ray is required");
                for (std::size_t i = 0; i < n.ray_angles.size(); ++i) {
                    const double a = n.ray_angles[i];
                    if (!(a >= 0.0) || !(a < kTwoPi))
                        throw Error(Err::BadSpec, "spiral_complement: ray angles must lie in [0, 2*pi)");
                    if (i > 0 && !(a > n.ray_angles[i - 1]))
                        throw Error(Err::BadSpec, "spiral_complement: ray angles must be sorted and distinct");
                }
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                if (n.members.empty())
                    throw Error(Err::BadSpec, "union: needs at least one member");
                for (const auto& m : n.members) m.validate();
            } else if constexpr (std::is_same_v<T, MobiusImage>) {
                if (!n.base) throw Error(Err::BadSpec, "mobius_image: missing base");
                if (std::abs(n.a * n.d - n.b * n.c) == 0.0)
                    throw Error(Err::BadSpec, "mobius_image: ad - bc must be nonzero");
                n.base->validate();
            }
        },
        node);
}

std::string DomainSpec::type_name() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) return "disk";
            else if constexpr (std::is_same_v<T, HalfPlane>) return "half_plane";
            else if constexpr (std::is_same_v<T, Wedge>) return "wedge";
            else if constexpr (std::is_same_v<T, SpiralSector>) return "spiral_sector";
            else if constexpr (std::is_same_v<T, SpiralComplement>) return "spiral_complement";
            else if constexpr (std::is_same_v<T, UnionDomain>) return "union";
            else return "mobius_image";
        },
        node);
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

bool contains(const DomainSpec& domain, cpx z) {
    if (!finite(z)) return false;
    return std::visit(
        [z](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return std::abs(z - n.center) < n.radius;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                const cpx rel = (z - n.boundary_point) * std::polar(1.0, -n.inward_normal_angle);
                return rel.real() > 0.0;
            } else if constexpr (std::is_same_v<T, Wedge>) {
                if (z == cpx{}) return false;
                return std::abs(std::arg(z)) < n.half_angle;
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                if (z == cpx{}) return false;
                const double psi = spiral_phase(z, n.order);
                const double gap = n.angle_hi - n.angle_lo;
                const double rel = mod_two_pi(psi - n.angle_lo);
                if (gap >= kTwoPi) return rel != 0.0;
                return rel > 0.0 && rel < gap;
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                if (z == cpx{}) return true;
                if (std::abs(z) < n.start_radius) return true;
                const cpx w{std::log(std::abs(z)), std::arg(z)};
                const double cs = std::cos(n.order);
                const cpx rot = std::polar(1.0, n.order);
                for (double a : n.ray_angles) {
                    const cpx anchor{std::log(n.start_radius), a};
                    const double off = ((w - anchor) * rot).imag();
                    if (dist_to_lattice(off, kTwoPi * cs) != 0.0) continue;
                    const double k = std::round(off / (kTwoPi * cs));
                    const cpx rel = (w - anchor - cpx(0.0, kTwoPi * k)) * rot;
                    if (rel.real() >= 0.0) return false; // on the excluded ray
                }
                return true;
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                for (const auto& m : n.members)
                    if (contains(m, z)) return true;
                return false;
            } else { // MobiusImage
                const cpx denom = -n.c * z + n.a;
                if (denom == cpx{}) return false; // preimage at infinity
                return contains(*n.base, mobius_inverse(n, z));
            }
        },
        domain.node);
}

// ---------------------------------------------------------------------------
// Distance lower bound
// ---------------------------------------------------------------------------

namespace {

double dist_impl(const DomainSpec& domain, cpx z);

double dist_spiral_sector(const SpiralSector& n, cpx z) {
    const cpx w{std::log(std::abs(z)), std::arg(z)};
    const cpx lo_anchor{0.0, n.angle_lo};
    const cpx hi_anchor{0.0, n.angle_hi};
    double d;
    if (n.angle_hi - n.angle_lo >= kTwoPi) {
        d = dist_to_spiral_line(w, lo_anchor, n.order).dist;
    } else {
        d = std::min(dist_to_spiral_line(w, lo_anchor, n.order).dist,
                     dist_to_spiral_line(w, hi_anchor, n.order).dist);
    }
    return std::abs(z) * (1.0 - std::exp(-d));
}

double dist_spiral_complement(const SpiralComplement& n, cpx z) {
    const double az = std::abs(z);
    double rho = az < n.start_radius ? n.start_radius - az : 0.0;
    if (az > 0.0) {
        const cpx w{std::log(az), std::arg(z)};
        double d = kInf;
        for (double a : n.ray_angles) {
            const cpx anchor{std::log(n.start_radius), a};
            d = std::min(d, dist_to_spiral_halfline(w, anchor, n.order).dist);
        }
        rho = std::max(rho, az * (1.0 - std::exp(-d)));
    }
    return rho;
}

double dist_impl(const DomainSpec& domain, cpx z) {
    return std::visit(
        [&domain, z](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return n.radius - std::abs(z - n.center);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                const cpx rel = (z - n.boundary_point) * std::polar(1.0, -n.inward_normal_angle);
                return rel.real();
            } else if constexpr (std::is_same_v<T, Wedge>) {
                return std::min(dist_to_ray(z, n.half_angle),
                                dist_to_ray(z, -n.half_angle));
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                return dist_spiral_sector(n, z);
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                return dist_spiral_complement(n, z);
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                double best = 0.0;
                for (const auto& m : n.members)
                    if (contains(m, z)) best = std::max(best, dist_impl(m, z));
                return best;
            } else { // MobiusImage
                const cpx w = mobius_inverse(n, z);
                double rho = dist_impl(*n.base, w);
                if (std::abs(n.c) > 0.0) {
                    const cpx pole = -n.d / n.c;
                    rho = std::min(rho, 0.5 * std::abs(w - pole));
                }
                const cpx den = n.c * w + n.d;
                const double deriv = std::abs(n.a * n.d - n.b * n.c) / std::norm(den);
                return 0.25 * rho * deriv; // Koebe quarter bound
            }
        },
        domain.node);
}

} // namespace

double dist_lower_bound(const DomainSpec& domain, cpx z) {
    if (!contains(domain, z))
        throw Error(Err::PointOutsideDomain, "dist_lower_bound: point not in domain");
    return std::max(dist_impl(domain, z), 0.0);
}

// ---------------------------------------------------------------------------
// Nearest boundary point
// ---------------------------------------------------------------------------

cpx nearest_boundary_point(const DomainSpec& domain, cpx z) {
    return std::visit(
        [&domain, z](const auto& n) -> cpx {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                const cpx rel = z - n.center;
                const double m = std::abs(rel);
                if (m == 0.0) return n.center + cpx(n.radius, 0.0);
                return n.center + rel * (n.radius / m);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                const cpx nrm = std::polar(1.0, n.inward_normal_angle);
                const double s = ((z - n.boundary_point) * std::conj(nrm)).real();
                return z - s * nrm;
            } else if constexpr (std::is_same_v<T, Wedge>) {
                const cpx p1 = project_to_ray(z, n.half_angle);
                const cpx p2 = project_to_ray(z, -n.half_angle);
                return std::abs(z - p1) <= std::abs(z - p2) ? p1 : p2;
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                const cpx w{std::log(std::abs(z)), std::arg(z)};
                HalfLineHit best = dist_to_spiral_line(w, cpx{0.0, n.angle_lo}, n.order);
                if (n.angle_hi - n.angle_lo < kTwoPi) {
                    const HalfLineHit hi = dist_to_spiral_line(w, cpx{0.0, n.angle_hi}, n.order);
                    if (hi.dist < best.dist) best = hi;
                }
                return std::exp(best.foot);
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                if (z == cpx{}) return std::polar(n.start_radius, n.ray_angles.front());
                const cpx w{std::log(std::abs(z)), std::arg(z)};
                HalfLineHit best;
                for (double a : n.ray_angles) {
                    const cpx anchor{std::log(n.start_radius), a};
                    const HalfLineHit h = dist_to_spiral_halfline(w, anchor, n.order);
                    if (h.dist < best.dist) best = h;
                }
                return std::exp(best.foot);
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                cpx best = z;
                double best_d = kInf;
                cpx fallback = z;
                double fallback_d = kInf;
                for (const auto& m : n.members) {
                    const cpx q = nearest_boundary_point(m, z);
                    const double d = std::abs(z - q);
                    if (d < fallback_d) {
                        fallback_d = d;
                        fallback = q;
                    }
                    if (!contains(domain, q) && d < best_d) {
                        best_d = d;
                        best = q;
                    }
                }
                return best_d < kInf ? best : fallback;
            } else { // MobiusImage
                const cpx w = mobius_inverse(n, z);
                return mobius_apply(n, nearest_boundary_point(*n.base, w));
            }
        },
        domain.node);
}

// ---------------------------------------------------------------------------
// Boundary curves
// ---------------------------------------------------------------------------

namespace {

BoundaryCurve make_curve(std::function<cpx(double)> point,
                         std::function<cpx(double)> normal, double lo, double hi,
                         bool truncated, std::string tag) {
    BoundaryCurve c;
    c.point = std::move(point);
    c.inward_normal = std::move(normal);
    c.t_lo = lo;
    c.t_hi = hi;
    c.truncated = truncated;
    c.tag = std::move(tag);
    return c;
}

// Spiral curve through exp(anchor), direction exp(-i*sigma) in the log plane.
BoundaryCurve spiral_curve(cpx anchor, double sigma, double t_lo, double t_hi,
                           double side, bool truncated, std::string tag) {
    const cpx dir = std::polar(1.0, -sigma);
    auto point = [anchor, dir](double t) { return std::exp(anchor + t * dir); };
    auto normal = [anchor, dir, side](double t) {
        const cpx z = std::exp(anchor + t * dir);
        const cpx tangent = dir * z / std::abs(dir * z);
        return side * cpx(0.0, 1.0) * tangent;
    };
    return make_curve(point, normal, t_lo, t_hi, truncated, std::move(tag));
}

} // namespace

std::vector<BoundaryCurve> boundary_curves(const DomainSpec& domain, double cap) {
    return std::visit(
        [cap](const auto& n) -> std::vector<BoundaryCurve> {
            using T = std::decay_t<decltype(n)>;
            std::vector<BoundaryCurve> out;
            if constexpr (std::is_same_v<T, Disk>) {
                const cpx c = n.center;
                const double R = n.radius;
                out.push_back(make_curve(
                    [c, R](double t) { return c + std::polar(R, t); },
                    [](double t) { return -std::polar(1.0, t); }, 0.0, kTwoPi,
                    false, "circle"));
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                const cpx p = n.boundary_point;
                const cpx nrm = std::polar(1.0, n.inward_normal_angle);
                const cpx tan = cpx(0.0, 1.0) * nrm;
                out.push_back(make_curve(
                    [p, tan](double t) { return p + t * tan; },
                    [nrm](double) { return nrm; }, -cap, cap, true, "line"));
            } else if constexpr (std::is_same_v<T, Wedge>) {
                for (int s : {+1, -1}) {
                    const double ang = s * n.half_angle;
                    const cpx dir = std::polar(1.0, ang);
                    const cpx nrm = cpx(0.0, -static_cast<double>(s)) * dir;
                    out.push_back(make_curve(
                        [dir](double t) { return t * dir; },
                        [nrm](double) { return nrm; }, 0.0, cap, true,
                        s > 0 ? "ray_hi" : "ray_lo"));
                }
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                const double tmax = std::log(cap) / std::cos(n.order);
                const bool full = n.angle_hi - n.angle_lo >= kTwoPi;
                out.push_back(spiral_curve(cpx{0.0, n.angle_lo}, n.order, -tmax,
                                           tmax, +1.0, true, "spiral_lo"));
                if (!full)
                    out.push_back(spiral_curve(cpx{0.0, n.angle_hi}, n.order, -tmax,
                                               tmax, -1.0, true, "spiral_hi"));
                else // single slit boundary: expose the other side too
                    out.push_back(spiral_curve(cpx{0.0, n.angle_lo}, n.order, -tmax,
                                               tmax, -1.0, true, "spiral_lo_other"));
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                const double tmax = std::log(cap / n.start_radius) / std::cos(n.order);
                int idx = 0;
                for (double a : n.ray_angles) {
                    const cpx anchor{std::log(n.start_radius), a};
                    for (int s : {+1, -1}) {
                        out.push_back(spiral_curve(
                            anchor, n.order, 0.0, tmax, static_cast<double>(s), true,
                            "ray" + std::to_string(idx) + (s > 0 ? "+" : "-")));
                    }
                    ++idx;
                }
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                int idx = 0;
                for (const auto& m : n.members) {
                    for (auto& c : boundary_curves(m, cap)) {
                        c.tag = "m" + std::to_string(idx) + ":" + c.tag;
                        out.push_back(std::move(c));
                    }
                    ++idx;
                }
            } else { // MobiusImage
                const MobiusImage m = n;
                for (const auto& base_curve : boundary_curves(*n.base, cap)) {
                    auto point = [m, base_curve](double t) {
                        return mobius_apply(m, base_curve.point(t));
                    };
                    auto normal = [m, base_curve](double t) {
                        const cpx w = base_curve.point(t);
                        const cpx den = m.c * w + m.d;
                        const cpx deriv = (m.a * m.d - m.b * m.c) / (den * den);
                        const cpx img = deriv * base_curve.inward_normal(t);
                        return img / std::abs(img);
                    };
                    out.push_back(make_curve(point, normal, base_curve.t_lo,
                                             base_curve.t_hi, true,
                                             "mobius:" + base_curve.tag));
                }
            }
            return out;
        },
        domain.node);
}

// ---------------------------------------------------------------------------
// Boundary segments
// ---------------------------------------------------------------------------

double BoundarySegment::total_weight() const {
    double w = 0.0;
    for (const auto& p : pieces) w += p.b - p.a;
    return w;
}

cpx BoundarySegment::at(double u) const {
    if (pieces.empty())
        throw Error(Err::DegenerateSegment, "BoundarySegment::at on empty segment");
    const double total = total_weight();
    double target = std::clamp(u, 0.0, 1.0) * total;
    for (const auto& p : pieces) {
        const double len = p.b - p.a;
        if (target <= len || &p == &pieces.back())
            return p.curve.point(p.a + std::min(target, len));
        target -= len;
    }
    return pieces.back().curve.point(pieces.back().b);
}

BoundarySegment restrict_boundary(const DomainSpec& domain,
                                  const std::function<bool(cpx)>& keep,
                                  double modulus_cap, const std::string& tag,
                                  int scan_n) {
    BoundarySegment seg;
    seg.tag = tag;
    for (const auto& curve : boundary_curves(domain, modulus_cap)) {
        seg.truncated = seg.truncated || curve.truncated;
        const double lo = curve.t_lo, hi = curve.t_hi;
        const double h = (hi - lo) / scan_n;
        auto ok = [&](double t) {
            const cpx z = curve.point(t);
            return finite(z) && std::abs(z) <= modulus_cap && keep(z);
        };
        // Scan for transitions; refine each by bisection.
        double prev_t = lo;
        bool prev = ok(prev_t);
        double open_a = prev ? lo : 0.0;
        bool in_run = prev;
        for (int i = 1; i <= scan_n; ++i) {
            const double t = lo + i * h;
            const bool cur = ok(t);
            if (cur != prev) {
                double a = prev_t, b = t;
                for (int it = 0; it < 48 && (b - a) > 1e-12 * (hi - lo); ++it) {
                    const double mid = 0.5 * (a + b);
                    if (ok(mid) == prev) a = mid;
                    else b = mid;
                }
                const double cut = 0.5 * (a + b);
                if (prev) { // run closes
                    if (cut > open_a) seg.pieces.push_back({curve, open_a, cut});
                    in_run = false;
                } else { // run opens
                    open_a = cut;
                    in_run = true;
                }
            }
            prev = cur;
            prev_t = t;
        }
        if (in_run && hi > open_a) seg.pieces.push_back({curve, open_a, hi});
    }
    return seg;
}

std::vector<cpx> boundary_grid(const BoundarySegment& segment, int n, double margin) {
    if (n < 2) throw Error(Err::BadSpec, "boundary_grid: n must be >= 2");
    if (segment.empty() || segment.total_weight() <= 0.0)
        throw Error(Err::DegenerateSegment, "boundary_grid: segment has no extent");
    const double total = segment.total_weight();
    std::vector<cpx> pts;
    pts.reserve(n);
    // Allocate points to pieces proportionally to parameter weight.
    int assigned = 0;
    for (std::size_t i = 0; i < segment.pieces.size(); ++i) {
        const auto& p = segment.pieces[i];
        const double len = p.b - p.a;
        int ni = (i + 1 == segment.pieces.size())
                     ? (n - assigned)
                     : std::max(1, static_cast<int>(std::lround(n * len / total)));
        ni = std::min(ni, n - assigned);
        if (ni <= 0) continue;
        assigned += ni;
        const double a = p.a + margin * len;
        const double b = p.b - margin * len;
        for (int j = 0; j < ni; ++j) {
            const double t = ni == 1 ? 0.5 * (a + b)
                                     : a + (b - a) * j / static_cast<double>(ni - 1);
            pts.push_back(p.curve.point(t));
        }
    }
    if (pts.empty())
        throw Error(Err::DegenerateSegment, "boundary_grid: no points produced");
    return pts;
}

// ---------------------------------------------------------------------------
// Largest arc
// ---------------------------------------------------------------------------

namespace {

// Angles where the circle |z| = r crosses analytically known boundary curves.
void collect_cut_angles(const DomainSpec& domain, double r, std::vector<double>& cuts) {
    std::visit(
        [&cuts, r](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                const double d = std::abs(n.center);
                if (d > 0.0) {
                    const double c = (r * r + d * d - n.radius * n.radius) / (2.0 * r * d);
                    if (std::abs(c) <= 1.0) {
                        const double base = std::arg(n.center);
                        const double w = std::acos(c);
                        cuts.push_back(mod_two_pi(base - w));
                        cuts.push_back(mod_two_pi(base + w));
                    }
                }
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                const double phi = n.inward_normal_angle;
                const double q = (n.boundary_point * std::polar(1.0, -phi)).real();
                if (std::abs(q) <= r) {
                    const double w = std::acos(q / r);
                    cuts.push_back(mod_two_pi(phi - w));
                    cuts.push_back(mod_two_pi(phi + w));
                }
            } else if constexpr (std::is_same_v<T, Wedge>) {
                cuts.push_back(mod_two_pi(n.half_angle));
                cuts.push_back(mod_two_pi(-n.half_angle));
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                const double shift = std::tan(n.order) * std::log(r);
                cuts.push_back(mod_two_pi(n.angle_lo - shift));
                if (n.angle_hi - n.angle_lo < kTwoPi)
                    cuts.push_back(mod_two_pi(n.angle_hi - shift));
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                if (r >= n.start_radius) {
                    const double shift = std::tan(n.order) * std::log(r / n.start_radius);
                    for (double a : n.ray_angles) cuts.push_back(mod_two_pi(a - shift));
                }
            } else if constexpr (std::is_same_v<T, UnionDomain>) {
                for (const auto& m : n.members) collect_cut_angles(m, r, cuts);
            } else {
                (void)n; // MobiusImage: no closed form; rely on the sweep
            }
        },
        domain.node);
}

} // namespace

double largest_arc(const DomainSpec& domain, double r, double angle_tol, int scan_n) {
    if (!(r > 0.0)) throw Error(Err::BadSpec, "largest_arc: r must be positive");
    auto member = [&](double theta) { return contains(domain, std::polar(r, theta)); };

    std::vector<double> cuts;
    collect_cut_angles(domain, r, cuts);

    // Sweep for membership transitions the cut list does not already explain.
    bool prev = member(0.0);
    double prev_theta = 0.0;
    for (int i = 1; i <= scan_n; ++i) {
        const double theta = kTwoPi * i / scan_n;
        const bool cur = member(theta);
        if (cur != prev) {
            double a = prev_theta, b = theta;
            while (b - a > angle_tol) {
                const double mid = 0.5 * (a + b);
                if (member(mid) == prev) a = mid;
                else b = mid;
            }
            cuts.push_back(mod_two_pi(0.5 * (a + b)));
        }
        prev = cur;
        prev_theta = theta;
    }

    if (cuts.empty()) return member(1.2345) ? kTwoPi : 0.0;

    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [angle_tol](double a, double b) { return b - a < 0.25 * angle_tol; }),
               cuts.end());

    // Arcs between consecutive cuts, classified by midpoint membership; runs
    // of interior arcs merge across cuts that turn out not to separate, with
    // circular wraparound handled by doubling the pass.
    const std::size_t m = cuts.size();
    std::vector<double> len(m);
    std::vector<char> inside(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double a = cuts[i];
        const double b = (i + 1 < m) ? cuts[i + 1] : cuts[0] + kTwoPi;
        len[i] = b - a;
        inside[i] = member(mod_two_pi(0.5 * (a + b))) ? 1 : 0;
    }
    double best = 0.0, run = 0.0;
    for (std::size_t j = 0; j < 2 * m; ++j) {
        const std::size_t i = j % m;
        if (inside[i]) {
            run += len[i];
            best = std::max(best, std::min(run, kTwoPi));
        } else {
            run = 0.0;
        }
    }
    return std::min(best, kTwoPi);
}

ArcLimit largest_arc_limit(const DomainSpec& domain, double r0, double factor,
                           int count) {
    ArcLimit out;
    double r = r0;
    for (int i = 0; i < count; ++i) {
        out.trace.emplace_back(r, largest_arc(domain, r));
        r *= factor;
    }
    out.value = out.trace.back().second;
    if (out.trace.size() >= 3) {
        const double a = out.trace[out.trace.size() - 3].second;
        const double b = out.trace[out.trace.size() - 2].second;
        const double c = out.trace.back().second;
        out.converged = std::abs(c - b) < 1e-6 && std::abs(b - a) < 1e-6;
    }
    return out;
}

std::optional<double> critical_exponent(const DomainSpec& domain) {
    return std::visit(
        [](const auto& n) -> std::optional<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return kInf;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return 0.5;
            } else if constexpr (std::is_same_v<T, Wedge>) {
                return kPi / (4.0 * n.half_angle);
            } else if constexpr (std::is_same_v<T, SpiralSector>) {
                const double gap = n.angle_hi - n.angle_lo;
                const double cs = std::cos(n.order);
                return kPi / (2.0 * gap * cs * cs);
            } else if constexpr (std::is_same_v<T, SpiralComplement>) {
                double max_gap = 0.0;
                const auto& a = n.ray_angles;
                for (std::size_t i = 0; i + 1 < a.size(); ++i)
                    max_gap = std::max(max_gap, a[i + 1] - a[i]);
                max_gap = std::max(max_gap, a.front() + kTwoPi - a.back());
                const double cs = std::cos(n.order);
                return kPi / (2.0 * max_gap * cs * cs);
            } else {
                return std::nullopt;
            }
        },
        domain.node);
}

const char* err_name(Err code) {
    switch (code) {
        case Err::BadSpec: return "BadSpec";
        case Err::PointOutsideDomain: return "PointOutsideDomain";
        case Err::DegenerateSegment: return "DegenerateSegment";
        case Err::MaxStepsExceeded: return "MaxStepsExceeded";
        case Err::NotNested: return "NotNested";
        case Err::TooFewSamples: return "TooFewSamples";
        case Err::DivergentMoment: return "DivergentMoment";
        case Err::BranchPole: return "BranchPole";
        case Err::QuadratureStall: return "QuadratureStall";
        case Err::EmptyPlus: return "EmptyPlus";
        case Err::MaxAlternationsExceeded: return "MaxAlternationsExceeded";
        case Err::NotInUpperHalfPlane: return "NotInUpperHalfPlane";
        case Err::DiskNotContained: return "DiskNotContained";
        case Err::EvaluationFailure: return "EvaluationFailure";
    }
    return "Unknown";
}

} // namespace exitlab
