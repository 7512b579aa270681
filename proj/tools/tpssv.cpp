#include "tpssv/cli.hpp"

int main(int argc, char **argv) { return tpssv::cli::run(argc, argv); }
