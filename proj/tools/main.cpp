#include "powerd/cli.hpp"

int main(int argc, char** argv) { return powerd::run_cli(argc, argv); }
