#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rmt/identity_lab.hpp"

namespace rmt {

using Rational = boost::multiprecision::cpp_rational;

// Minimal complex pair; only what the Chazy II change of variables needs.
template <class T>
struct CPair {
  T re{0}, im{0};
  CPair() = default;
  CPair(T r, T i = T(0)) : re(std::move(r)), im(std::move(i)) {}
  friend CPair operator+(const CPair& a, const CPair& b) { return {a.re + b.re, a.im + b.im}; }
  friend CPair operator-(const CPair& a, const CPair& b) { return {a.re - b.re, a.im - b.im}; }
  friend CPair operator*(const CPair& a, const CPair& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CPair operator*(const T& s, const CPair& a) { return {s * a.re, s * a.im}; }
};

template <class T>
struct SigmaFormPVT {
  T nu1, nu2, nu3;
};
template <class T>
struct SigmaFormPIVT {
  T nu1, nu2;
};
using SigmaFormPV = SigmaFormPVT<Real>;
using SigmaFormPIV = SigmaFormPIVT<Real>;

enum class ChazyMember { First, Second };

// beta1 is a complex pair: imaginary for the second member with real nu,
// real for the first member. gamma1 is unused (0) for the first member.
template <class T>
struct ChazyParamsT {
  ChazyMember member = ChazyMember::Second;
  T alpha1{0}, beta1_re{0}, beta1_im{0}, gamma1{0};
};
using ChazyParams = ChazyParamsT<Real>;

template <class T>
ChazyParamsT<T> chazy_second_params(const SigmaFormPVT<T>& v) {
  const T &a = v.nu1, &b = v.nu2, &c = v.nu3;
  ChazyParamsT<T> p;
  p.member = ChazyMember::Second;
  p.alpha1 = T(3 * a * a + 3 * b * b + 3 * c * c - 2 * a * b - 2 * a * c - 2 * b * c) / 2;
  p.beta1_im = T((a - b - c) * (a + b - c) * (a - b + c)) / 2;
  p.gamma1 = -T((a + b - 3 * c) * (3 * a - b - c) * (a - 3 * b + c) * (a + b + c)) / 16;
  return p;
}

template <class T>
ChazyParamsT<T> chazy_first_params(const SigmaFormPIVT<T>& v) {
  const T &a = v.nu1, &b = v.nu2;
  ChazyParamsT<T> p;
  p.member = ChazyMember::First;
  p.alpha1 = T(-a * a + a * b - b * b) / 6;
  p.beta1_re = -T((a - 2 * b) * (2 * a - b) * (a + b)) / 54;
  return p;
}

// Left side squared minus right side of the second-order second-degree ODE for
// rho = Xi' obtained from the sigma form of Painlevé V.
template <class T>
T rho_pv_difference(const SigmaFormPVT<T>& v, const T& t, const T& rho, const T& d_rho, const T& dd_rho) {
  const T s = v.nu1 + v.nu2 + v.nu3, e = v.nu1 * v.nu2 + v.nu1 * v.nu3 + v.nu2 * v.nu3, q = v.nu1 * v.nu2 * v.nu3;
  const T r2 = rho * rho, r3 = r2 * rho;
  const T lhs = t * (d_rho + t * dd_rho) + 8 * r3 + 6 * s * r2 + 4 * e * rho + 2 * q;
  const T f = 4 * rho + s - t;
  const T rhs = f * f * (t * t * d_rho * d_rho + 4 * r3 * rho + 4 * s * r3 + 4 * e * r2 + 4 * q * rho);
  return lhs * lhs - rhs;
}

// Same for the sigma form of Painlevé IV.
template <class T>
T rho_piv_difference(const SigmaFormPIVT<T>& v, const T& t, const T& rho, const T& d_rho, const T& dd_rho) {
  const T s = v.nu1 + v.nu2, q = v.nu1 * v.nu2;
  const T lhs = dd_rho + 6 * rho * rho + 4 * s * rho + 2 * q;
  return lhs * lhs - 4 * t * t * (d_rho * d_rho + 4 * rho * rho * rho + 4 * s * rho * rho + 4 * q * rho);
}

// Values of theta = -2i rho - (i/2) sum nu and its z-derivatives, given e^z
// and rho, rho', rho'' at t = 2i e^z (dt/dz = t).
template <class T>
struct ChazyTwoPoint {
  CPair<T> ez, theta, d_theta, dd_theta;
};

template <class T>
ChazyTwoPoint<T> chazy_second_point(const T& sum_nu, const CPair<T>& ez, const CPair<T>& rho, const CPair<T>& d_rho,
                                    const CPair<T>& dd_rho) {
  const CPair<T> mi2(T(0), T(-2));
  const CPair<T> t = CPair<T>(T(0), T(2)) * ez;
  ChazyTwoPoint<T> p;
  p.ez = ez;
  p.theta = mi2 * rho + CPair<T>(T(0), -sum_nu / 2);
  p.d_theta = mi2 * (t * d_rho);
  p.dd_theta = mi2 * (t * d_rho + t * t * dd_rho);
  return p;
}

// Left minus right side of the second member of the Chazy II system.
template <class T>
CPair<T> chazy_second_difference(const ChazyParamsT<T>& k, const ChazyTwoPoint<T>& p) {
  const CPair<T> a1(k.alpha1), b1(k.beta1_re, k.beta1_im), g1(k.gamma1);
  const CPair<T>& th = p.theta;
  const CPair<T> th2 = th * th;
  const CPair<T> l = p.dd_theta - T(2) * (th2 * th) - a1 * th - b1;
  const CPair<T> w = th - p.ez;
  const CPair<T> br = p.d_theta * p.d_theta - th2 * th2 - a1 * th2 - T(2) * (b1 * th) - g1;
  return l * l + T(4) * (w * w * br);
}

// Left minus right side of the first member of the Chazy II system with
// v = -rho/2 - (nu1 + nu2)/6 at z = sqrt(2) t. Written through z^2 = 2t^2 and
// v'^2 = rho'^2/8 so that it stays rational.
template <class T>
T chazy_first_difference(const ChazyParamsT<T>& k, const SigmaFormPIVT<T>& v, const T& t, const T& rho,
                         const T& d_rho, const T& dd_rho) {
  const T th = -rho / 2 - (v.nu1 + v.nu2) / 6;
  const T dd = -dd_rho / 4, d2 = d_rho * d_rho / 8;
  const T l = dd - 6 * th * th - k.alpha1;
  return l * l - 2 * t * t * (d2 - 4 * th * th * th - 2 * k.alpha1 * th - k.beta1_re);
}

struct RhoSample {
  Real t, rho, d_rho, dd_rho;
};

ResidualReport rho_ode_residual_pv(const SigmaFormPV& nu, const RhoSample& p);
ResidualReport rho_ode_residual_piv(const SigmaFormPIV& nu, const RhoSample& p);

// Chazy II second member along z = ln(t / 2i) for real t != 0, on the branch
// Im z = -pi/2 (t > 0) or +pi/2 (t < 0). `point` carries Re z.
struct ChazyPathReport {
  std::vector<ResidualReport> points;
  Real worst;
  std::string branch;
};
ChazyPathReport chazy_second_residual(const ChazyParams& k, const SigmaFormPV& nu, const std::vector<RhoSample>& path,
                                      const PrecisionContext& ctx);
ChazyPathReport chazy_first_residual(const ChazyParams& k, const SigmaFormPIV& nu,
                                     const std::vector<RhoSample>& path);

enum class ExampleId { LUE_Largest, MIMO_MGF, TimeDependentJacobi, PollaczekJacobi, GUE_Largest, GUE_Gap };

// nu_i = c0 + cn n + ca alpha + cb b, where b is the example's third parameter
// (lambda for MIMO, beta for the two Jacobi weights).
struct AffineNu {
  Rational c0, cn, ca, cb;
  Rational at(const Rational& n, const Rational& alpha, const Rational& b) const {
    return c0 + cn * n + ca * alpha + cb * b;
  }
};

struct ExampleSpec {
  ExampleId id;
  std::string name;
  ChazyMember member;
  std::vector<AffineNu> nu_map;  // three entries for P_V, two for P_IV
  std::string nu_text;
  std::string rho_def;      // rho in terms of the example's r_n
  std::string t_map;        // relation between t and z
  AffineNu theta_shift;     // imaginary shift of theta (P_V) or real shift of v (P_IV)
};

std::vector<ExampleSpec> example_table();
const ExampleSpec& example(ExampleId id);

SigmaFormPVT<Rational> pv_nu(const ExampleSpec& e, const Rational& n, const Rational& alpha, const Rational& b);
SigmaFormPIVT<Rational> piv_nu(const ExampleSpec& e, const Rational& n);

// Closed forms of (alpha1, beta1, gamma1) as displayed for each example,
// transcribed independently of the nu maps.
ChazyParamsT<Rational> displayed_params(ExampleId id, const Rational& n, const Rational& alpha, const Rational& b);

// Exact parameters obtained through the nu map.
ChazyParamsT<Rational> mapped_params(const ExampleSpec& e, const Rational& n, const Rational& alpha,
                                     const Rational& b);

std::string to_string(const Rational& q);

// rho = r_n along the LUE trajectory and rho = 2 r_n along the GUE one.
std::vector<RhoSample> lue_rho_path(int n, const Real& alpha, const std::vector<Real>& ts, const PrecisionContext& ctx);
std::vector<RhoSample> gue_rho_path(int n, const std::vector<Real>& ts, const PrecisionContext& ctx);

// Manufactured rho from generic data: integrates the unsquared third-order
// system for (Xi, rho, rho') in double precision, with Xi fixed by the sigma
// form at t0 (positive root). rho'' is taken from the system.
std::vector<RhoSample> manufactured_pv_path(const SigmaFormPV& nu, double t0, double rho0, double d_rho0,
                                            const std::vector<double>& ts);
std::vector<RhoSample> manufactured_piv_path(const SigmaFormPIV& nu, double t0, double rho0, double d_rho0,
                                             const std::vector<double>& ts);

}  // namespace rmt
