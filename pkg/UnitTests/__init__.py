## This file just makes the UnitTests directory a package and lets me import stuff