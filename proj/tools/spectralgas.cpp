#include "spectralgas/cli.hpp"

int main(int argc, char** argv) { return spectralgas::cli::main(argc, argv); }
