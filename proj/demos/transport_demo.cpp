// Random domain in the Heisenberg group: mass, gradient and the transport
// report over the selected ball.

#include <iostream>

#include "vtl/domain.hpp"
#include "vtl/transport.hpp"

int main() {
  using namespace vtl;
  const auto group = TorusBundleGroup::nil();
  const auto gens = default_generators(group);
  const auto d = random_connected(group, gens, 200, 3, 42);
  std::cout << "support " << d.support_size() << ", mass " << d.mass() << ", gradient " << gradient(d) << '\n';
  const auto rep = verify_bounds(d);
  std::cout << to_json(rep).dump(2) << '\n';
}
