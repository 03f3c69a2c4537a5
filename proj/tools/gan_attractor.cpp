#include "gan/cli.hpp"

int main(int argc, char** argv) { return gan::cli::run_cli(argc, argv); }
