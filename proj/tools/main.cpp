#include "trifrac/cli.hpp"

int main(int argc, char** argv) { return trifrac::cli_dispatch(argc, argv); }
