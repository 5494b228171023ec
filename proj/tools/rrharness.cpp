#include "rr/cli.hpp"

int main(int argc, char** argv) { return rr::cli::run(argc, argv); }
