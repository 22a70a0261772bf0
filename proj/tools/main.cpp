#include "ldpclp/cli.hpp"

int main(int argc, char** argv) { return ldpclp::run(argc, argv); }
