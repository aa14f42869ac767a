#include "fistab/cli/run.hpp"

int main(int argc, char** argv) { return fistab::cli::run(argc, argv); }
