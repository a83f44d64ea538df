#include "ftriad/cli.hpp"

int main(int argc, char** argv) { return ftriad::run_cli(argc, argv); }
