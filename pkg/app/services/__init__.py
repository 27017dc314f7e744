# app/services/__init__.py
"""
Services package for the BER Bayesian-network pipeline.
Sub-packages: modem, channel, discretizer, bayes_net, experiment.
"""
