#include <cstdio>
int main() { std::puts("clubkit: not wired up yet"); return 1; }
