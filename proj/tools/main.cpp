#include "prxml/cli.hpp"

int main(int argc, char** argv) { return prxml::run_cli(argc, argv); }
