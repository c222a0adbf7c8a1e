#include <iostream>

#include "gsq/app/cli.hpp"

#ifndef GSQ_VERSION
#define GSQ_VERSION "unknown"
#endif

int main(int argc, char** argv) { return gsq::app::main_entry(argc, argv, GSQ_VERSION, std::cout, std::cerr); }
