#include "icore/cli.hpp"

int main(int argc, char** argv) { return icore::cli::run(argc, argv); }
