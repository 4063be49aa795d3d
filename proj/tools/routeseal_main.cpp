#include "routeseal/cli.hpp"

int main(int argc, char** argv) { return routeseal::cli_main(argc, argv); }
