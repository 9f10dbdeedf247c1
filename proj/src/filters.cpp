#include "wavescale/filters.hpp"

#include <cmath>
#include <cstdlib>

#include "wavescale/errors.hpp"

namespace wavescale {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Scaling filters under the two-scale convention phi(x) = sqrt2 sum h_k phi(2x-k).
// The tables are the standard published coefficients for the orthonormal
// Daubechies, Coiflet and Symmlet families; validate_filter() checks them
// against the invariants at construction.

const std::vector<double> kHaar = {0.7071067811865476, 0.7071067811865476};

const std::vector<double> kDaub6 = {
    0.33267055295008262,  0.80689150931109258,   0.45987750211849157,
    -0.13501102001025459, -0.085441273882026662, 0.035226291885709537,
};

// 12-tap Coiflet, four vanishing moments.
const std::vector<double> kCoiflet4 = {
    0.016387336464324883,  -0.041464936784348858,  -0.067372554722644927,
    0.38611006682236481,   0.81272363544964909,    0.41700518442315003,
    -0.076488599079401117, -0.059434418648265510,  0.023680171945365966,
    0.0056114348191954710, -0.0018232088707463721, -0.00072054944554841422,
};

const std::vector<double> kSymmlet8 = {
    0.032223100604051468, -0.012603967262031304, -0.099219543576633533,
    0.29785779560530605,  0.80373875180513208,   0.49761866763277499,
    -0.029635527646002492, -0.075765714789502213,
};

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const std::size_t len = h.size();
  std::vector<double> g(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    g[k] = sign * h[len - 1 - k];
  }
  return g;
}

}  // namespace

WaveletFilter make_filter(FilterName name) {
  WaveletFilter filter;
  filter.name = name;
  switch (name) {
    case FilterName::haar:
      filter.lowpass = kHaar;
      filter.vanishing_moments = 1;
      break;
    case FilterName::daub6:
      filter.lowpass = kDaub6;
      filter.vanishing_moments = 3;
      break;
    case FilterName::coiflet4:
      filter.lowpass = kCoiflet4;
      filter.vanishing_moments = 4;
      break;
    case FilterName::symmlet8:
      filter.lowpass = kSymmlet8;
      filter.vanishing_moments = 4;
      break;
    default:
      throw UnsupportedFilter("unknown wavelet filter");
  }
  filter.highpass = quadrature_mirror(filter.lowpass);
  validate_filter(filter);
  return filter;
}

void validate_filter(const WaveletFilter& filter) {
  const auto& h = filter.lowpass;
  const auto& g = filter.highpass;
  const std::size_t len = h.size();
  if (len < 2 || len % 2 != 0 || g.size() != len) {
    throw UnsupportedFilter("filter must have even length >= 2");
  }

  double sum_h = 0.0;
  for (double v : h) sum_h += v;
  if (std::abs(sum_h - kSqrt2) > 1e-12) {
    throw UnsupportedFilter("lowpass does not sum to sqrt(2): " +
                            filter_token(filter.name));
  }

  for (std::size_t m = 0; m < len / 2; ++m) {
    double dot = 0.0;
    for (std::size_t k = 0; k + 2 * m < len; ++k) dot += h[k] * h[k + 2 * m];
    const double target = (m == 0) ? 1.0 : 0.0;
    if (std::abs(dot - target) > 1e-10) {
      throw UnsupportedFilter("lowpass violates shift-orthonormality: " +
                              filter_token(filter.name));
    }
  }

  for (int p = 0; p < filter.vanishing_moments; ++p) {
    double moment = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      moment += std::pow(static_cast<double>(k), p) * g[k];
    }
    const double tol = (p == 0) ? 1e-12 : 1e-8;
    if (std::abs(moment) > tol) {
      throw UnsupportedFilter("highpass moment " + std::to_string(p) +
                              " does not vanish: " + filter_token(filter.name));
    }
  }
}

FilterName parse_filter_name(std::string_view token) {
  if (token == "haar") return FilterName::haar;
  if (token == "daub6") return FilterName::daub6;
  if (token == "coif4") return FilterName::coiflet4;
  if (token == "sym8") return FilterName::symmlet8;
  throw UnsupportedFilter("unsupported filter name: " + std::string(token));
}

std::string filter_token(FilterName name) {
  switch (name) {
    case FilterName::haar: return "haar";
    case FilterName::daub6: return "daub6";
    case FilterName::coiflet4: return "coif4";
    case FilterName::symmlet8: return "sym8";
  }
  return "?";
}

std::vector<FilterName> all_filters() {
  return {FilterName::haar, FilterName::daub6, FilterName::coiflet4,
          FilterName::symmlet8};
}

}  // namespace wavescale
