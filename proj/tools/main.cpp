#include "rlqas/cli.hpp"

int main(int argc, char** argv) { return rlqas::run_cli(argc, argv); }
