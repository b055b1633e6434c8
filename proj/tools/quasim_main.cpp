#include "quasim/cli/cli.hpp"

int main(int argc, char** argv) { return quasim::cli::run_cli(argc, argv); }
