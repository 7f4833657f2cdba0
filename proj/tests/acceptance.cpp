#include <algorithm>
#include <iostream>

#include "affperm/verify.hpp"

int main() {
  const auto results = affperm::verify::run_all(affperm::verify::Level::Full, std::cout);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
