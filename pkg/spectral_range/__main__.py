from spectral_range.cli import main

main()
