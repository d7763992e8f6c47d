#pragma once
// Shared between the scalar and AVX2 kernel translation units.

#include <cstddef>
#include <cstdint>

namespace itbm::kern::detail {

// Philox4x32 round constants (Salmon et al., Random123).
inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// AS241 rational-polynomial coefficients (Wichura 1988, PPND16).
inline constexpr double kQA[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e2,
    1.9715909503065514427e3,  1.3731693765509461125e4,
    4.5921953931549871457e4,  6.7265770927008700853e4,
    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double kQB[8] = {
    1.0,                      4.2313330701600911252e1,
    6.8718700749205790830e2,  5.3941960214247511077e3,
    2.1213794301586595867e4,  3.9307895800092710610e4,
    2.8729085735721942674e4,  5.2264952788528545610e3};
inline constexpr double kQC[8] = {
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kQD[8] = {
    1.0,                      2.05319162663775882187e0,
    1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
inline constexpr double kQE[8] = {
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kQF[8] = {
    1.0,                      5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

// Central branch, |p - 0.5| <= 0.425. Plain mul/add Horner; the AVX2 variant
// mirrors this operation order exactly.
inline double quantile_central(double q) {
  const double r = 0.180625 - q * q;
  double num = kQA[7];
  double den = kQB[7];
  for (int i = 6; i >= 0; --i) {
    num = num * r + kQA[i];
    den = den * r + kQB[i];
  }
  return q * (num / den);
}

// Tail branches (p < 0.075 or p > 0.925). Uses libm log/sqrt; both backends
// call this same compiled function so the results agree bitwise.
double quantile_tail(double p, double q);

inline double normal_from_u64(std::uint64_t u) {
  const double p = (static_cast<double>(u >> 12) + 0.5) * 0x1p-52;
  const double q = p - 0.5;
  if (q <= 0.425 && q >= -0.425) return quantile_central(q);
  return quantile_tail(p, q);
}

// One Philox4x32-10 block, reference implementation.
void philox_block_scalar(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t block, std::uint32_t out[4]);

struct KernelTable {
  void (*philox_blocks)(std::uint64_t, std::uint64_t, std::uint64_t,
                        std::size_t, std::uint32_t*);
  void (*fill_normals)(std::uint64_t, std::uint64_t, std::uint64_t,
                       std::size_t, double*);
  void (*fill_uniform01)(std::uint64_t, std::uint64_t, std::uint64_t,
                         std::size_t, double*);
  void (*minmax)(const double*, std::size_t, double&, double&);
  double (*sum)(const double*, std::size_t);
  double (*power_sum_diff)(const double*, std::size_t, double);
};

extern const KernelTable kScalarTable;
#if ITBM_HAVE_AVX2
extern const KernelTable kAvx2Table;
#endif

}  // namespace itbm::kern::detail
