package test.nop;

public abstract class Polymorphism {
    public abstract void draw();

    public abstract void color();
}
