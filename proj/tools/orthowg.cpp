#include "orthowg/cli.hpp"

int main(int argc, char** argv) { return orthowg::run_cli(argc, argv); }
