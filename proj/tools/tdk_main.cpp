#include "tdk/cli.hpp"

int main(int argc, char** argv) { return tdk::run_cli(argc, argv); }
