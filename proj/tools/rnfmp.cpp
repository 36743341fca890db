#include "rnfmp/cli.hpp"

int main(int argc, char** argv) { return rnfmp::run_cli(argc, argv); }
