#include "fklab/cli.hpp"

int main(int argc, char** argv) { return fklab::cli::run(argc, argv); }
