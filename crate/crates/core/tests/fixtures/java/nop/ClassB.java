package test.nop;

public class ClassB extends Polymorphism {
    public void draw() {
    }

    public void color() {
    }
}
