#include "slowhom/cli.hpp"

int main(int argc, char** argv) { return slowhom::cli::run(argc, argv); }
