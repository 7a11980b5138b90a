#include "ustlocal/harness/cli.hpp"

int main(int argc, char** argv) { return ustlocal::harness::run_cli(argc, argv); }
