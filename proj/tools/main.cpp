#include "affperm/cli.hpp"

int main(int argc, char** argv) { return affperm::cli::run(argc, argv); }
