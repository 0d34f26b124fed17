// Writes a seeded random oracle instance as JSON: make-instance SEED SITES REQUESTS

#include <cstdlib>
#include <iostream>

#include "geosched/errors.hpp"
#include "geosched/scenario.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: make-instance SEED SITES REQUESTS\n";
    return 2;
  }
  try {
    auto problem = geosched::random_problem(std::strtoull(argv[1], nullptr, 10),
                                            std::strtoul(argv[2], nullptr, 10),
                                            std::strtoul(argv[3], nullptr, 10));
    geosched::write_instance(std::cout, problem);
  } catch (const geosched::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
