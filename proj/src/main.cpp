#include <iostream>

#include "dklms/cli.hpp"

int main(int argc, char** argv) {
  return dklms::cli_main(argc, argv, std::cout, std::cerr);
}
