// Prints ball sizes of the three default Cayley graphs and their fitted
// growth exponents.

#include <cstdio>

#include "vtl/cayley.hpp"
#include "vtl/profiler.hpp"

int main() {
  using namespace vtl;
  struct Row {
    const char* name;
    TorusBundleGroup group;
    std::uint32_t rmax;
  };
  for (const auto& row : {Row{"z2", TorusBundleGroup::z2(), 20}, Row{"nil", TorusBundleGroup::nil(), 14},
                          Row{"sol", TorusBundleGroup::sol(), 10}}) {
    const auto series = growth_series(row.group, default_generators(row.group), row.rmax);
    std::printf("%-4s", row.name);
    for (auto s : series) std::printf(" %llu", static_cast<unsigned long long>(s));
    const auto poly = growth_exponent(series, row.rmax / 2, row.rmax);
    const auto expo = growth_rate(series, row.rmax / 2, row.rmax);
    std::printf("\n     degree %.3f (r2 %.4f), log-rate %.3f (r2 %.4f)\n", poly.slope, poly.r_squared, expo.slope,
                expo.r_squared);
  }
}
