# DiDPR package
