#include <exception>
#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  try {
    return ambsee::cli::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
