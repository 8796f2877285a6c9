#include <iostream>

#include "sparsereg/cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = sparsereg::cli::parse_command_line(argc, argv, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return sparsereg::cli::dispatch(*parsed.config, std::cout, std::cerr);
}
