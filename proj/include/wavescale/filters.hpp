#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavescale {

enum class FilterName { haar, daub6, coiflet4, symmlet8 };

// Orthonormal two-channel filter pair. The lowpass (scaling) filter sums to
// sqrt(2); the highpass is its quadrature mirror, g_k = (-1)^k h_{L-1-k}.
struct WaveletFilter {
  FilterName name;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  int vanishing_moments;

  std::size_t length() const { return lowpass.size(); }
};

WaveletFilter make_filter(FilterName name);

// Throws if the coefficient tables violate the orthonormality or moment
// invariants (sum = sqrt2 within 1e-12, shift-orthonormality within 1e-10,
// vanishing moments within 1e-8).
void validate_filter(const WaveletFilter& filter);

// CLI tokens: haar | daub6 | coif4 | sym8
FilterName parse_filter_name(std::string_view token);
std::string filter_token(FilterName name);

std::vector<FilterName> all_filters();

}  // namespace wavescale
